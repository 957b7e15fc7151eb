"""The translation operators S_t, their adjoints, and the Cauchy dual family.

Five kinds act on step functions:

    S          (S_t f)(x)  = sqrt(phi(x)/phi(x-t))   f(x-t),  x >= t
    S_adjoint  (S_t* f)(x) = sqrt(phi(x+t)/phi(x))   f(x+t)
    S_dual     (S_t' f)(x) = sqrt(phi(x-t)/phi(x))   f(x-t),  x >= t
    L          (L_t f)(x)  = sqrt(phi(x)/phi(x+t))   f(x+t)      (= S_t'*)
    L_adjoint  same action as S_dual                              (= S_t'')

Powers are applied through the closed-form k-step weight, e.g.
(S_t^k f)(x) = sqrt(phi(x)/phi(x-kt)) f(x-kt), never by repeated
application, so midpoint evaluation error does not compound. Translation is
exact breakpoint arithmetic; the weight multiplies each cell by its value at
the output cell midpoint.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NotLeftInvertibleError, TruncationWarning
from .stepfun import StepFunction, norm_sq
from .symbols import Symbol, check_left_invertible, eval_phi
from .util import golden_max, golden_min

KINDS = ("S", "S_adjoint", "S_dual", "L", "L_adjoint")
_RIGHT = {"S", "S_dual", "L_adjoint"}  # support marches right by t per power
_DUAL = {"S_dual", "L", "L_adjoint"}  # need left invertibility


@dataclass(frozen=True)
class OperatorHandle:
    symbol: Symbol
    t: float
    kind: str


def make_operator(
    symbol: Symbol,
    t: float,
    kind: str = "S",
    x_max: float | None = None,
    eps_inv: float = 1e-6,
) -> OperatorHandle:
    """Build a validated handle; dual kinds require the inf ratio check."""
    if not t > 0:
        raise ValueError("t must be positive")
    if kind not in KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    if kind in _DUAL:
        window = x_max if x_max is not None else 64.0 * t
        chk = check_left_invertible(symbol, t, window, eps_inv=eps_inv)
        if not chk.ok:
            raise NotLeftInvertibleError(
                f"inf phi(x+t)/phi(x) ~ {chk.inf_estimate:.3g} at x={chk.arg_inf:.6g} "
                f"is not above {eps_inv:g}"
            )
    return OperatorHandle(symbol, float(t), kind)


def _power_weight(op: OperatorHandle, n: int, mu: np.ndarray) -> np.ndarray:
    """Closed-form n-step multiplier evaluated at output points mu."""
    phi = op.symbol
    nt = n * op.t
    if op.kind == "S":
        return np.sqrt(eval_phi(phi, mu) / eval_phi(phi, mu - nt))
    if op.kind in ("S_dual", "L_adjoint"):
        return np.sqrt(eval_phi(phi, mu - nt) / eval_phi(phi, mu))
    if op.kind == "S_adjoint":
        return np.sqrt(eval_phi(phi, mu + nt) / eval_phi(phi, mu))
    return np.sqrt(eval_phi(phi, mu) / eval_phi(phi, mu + nt))  # L


def apply_power(
    op: OperatorHandle, n: int, f: StepFunction, x_max: float | None = None
) -> StepFunction:
    """Apply the n-th power in one step; n = 0 is the identity."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    if n == 0 or f.values.size == 0:
        return f
    shift = n * op.t if op.kind in _RIGHT else -n * op.t
    g = f.translate(shift)
    if g.values.size == 0:
        return g
    out = g.with_values(g.values * _power_weight(op, n, g.midpoints()))
    if x_max is not None and out.hi > x_max:
        kept = out.restrict(0.0, x_max)
        dropped = norm_sq(out) - norm_sq(kept)
        if dropped > 0:
            warnings.warn(
                f"dropped mass {dropped:.3g} beyond x_max={x_max:g}", TruncationWarning
            )
        return StepFunction(kept.breakpoints, kept.values, truncated=True)
    return out


def apply(op: OperatorHandle, f: StepFunction, x_max: float | None = None) -> StepFunction:
    return apply_power(op, 1, f, x_max=x_max)


# ---------------------------------------------------------------------------
# Norms and lower bounds
# ---------------------------------------------------------------------------


def n_step_base_ratio(op: OperatorHandle, n: int):
    """The n-step weight as a function of the base point x (where f lives).

    ||op^n f||^2 = integral of this squared against |f|^2, so its essential
    sup / inf over the window bound the operator norm from both sides.
    """
    phi = op.symbol
    nt = n * op.t

    if op.kind in ("S", "S_adjoint"):

        def g(x):
            x = np.asarray(x, dtype=float)
            return np.sqrt(eval_phi(phi, x + nt) / eval_phi(phi, x))

    else:

        def g(x):
            x = np.asarray(x, dtype=float)
            return np.sqrt(eval_phi(phi, x) / eval_phi(phi, x + nt))

    return g


@dataclass(frozen=True)
class ExtremumEstimate:
    value: float
    arg: float
    window_limited: bool  # extremum sits at the far window edge x = x_max


def _sampled_extremum(op, n, x_max, samples, mode) -> ExtremumEstimate:
    g = n_step_base_ratio(op, n)
    grid = np.linspace(0.0, x_max, samples)
    vals = g(grid)
    i = int(np.argmax(vals) if mode == "max" else np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, samples - 1)]
    scalar = lambda y: float(g(np.asarray([y]))[0])
    if mode == "max":
        arg, refined = golden_max(scalar, lo, hi)
        better = refined > vals[i]
        value = max(float(vals[i]), refined)
    else:
        arg, refined = golden_min(scalar, lo, hi)
        better = refined < vals[i]
        value = min(float(vals[i]), refined)
    return ExtremumEstimate(value, float(arg) if better else float(grid[i]), i == samples - 1)


def estimate_norm(
    op: OperatorHandle, n: int, x_max: float, samples: int = 10_001
) -> ExtremumEstimate:
    """Sampled essential sup of the n-step weight, refined near the arg-sup.

    Monotone under refinement: the returned value never drops below the grid
    maximum. Continuity of phi makes the sampled sup converge to the true
    essential sup as the grid densifies.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _sampled_extremum(op, n, x_max, samples, "max")


def estimate_lower_bound(
    op: OperatorHandle, n: int, x_max: float, samples: int = 10_001
) -> ExtremumEstimate:
    """Sampled essential inf of the n-step weight: m(op^n) = inf ||op^n f||/||f||.

    Concentrating f near the arg-inf realizes the bound, so this is the
    injectivity modulus of the n-th power on the window. For the left-shift
    kinds (S_adjoint, L) the kernel makes the literal infimum zero; the
    sampled value is the modulus transverse to the kernel.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _sampled_extremum(op, n, x_max, samples, "min")


def operator_norm(op: OperatorHandle, n: int, x_max: float, samples: int = 10_001) -> float:
    return estimate_norm(op, n, x_max, samples).value


def lower_bound_m(op: OperatorHandle, n: int, x_max: float, samples: int = 10_001) -> float:
    return estimate_lower_bound(op, n, x_max, samples).value

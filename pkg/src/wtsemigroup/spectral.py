"""Spectral picture: radius estimates, annulus bounds, symmetry checks.

The spectral radius comes from the norm sequence, r = lim ||S_t^n||^(1/n),
estimated by a log-linear fit over the tail half of the sequence; the same
scheme on the injectivity moduli m(S_t^n) gives the lower bound r_1. The
approximate point spectrum lies in the annulus r_1 <= |z| <= r, the point
spectrum is empty, the adjoint's point spectrum fills the model disc, and
the spectrum itself is the closed disc of radius r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import kernel_preimage
from .operators import (
    OperatorHandle,
    apply,
    apply_power,
    estimate_lower_bound,
    estimate_norm,
    make_operator,
)
from .stepfun import StepFunction, indicator, inner, norm
from .symbols import Symbol


@dataclass(frozen=True)
class RadiusEstimate:
    estimate: float
    slope: float
    fit_residual: float
    sequence: tuple[float, ...]  # a_n = value_n ** (1/n)
    values: tuple[float, ...]  # ||op^n|| or m(op^n) for n = 1..n_max
    args: tuple[float, ...]  # where each extremum was attained (base point)
    window_limited: bool
    non_convergent: bool

    @property
    def last_term(self) -> float:
        return self.sequence[-1]


def _fit_radius(ests, fit_residual_max: float) -> RadiusEstimate:
    values = [e.value for e in ests]
    ns = np.arange(1, len(values) + 1, dtype=float)
    vals = np.asarray(values, dtype=float)
    logs = np.log(vals)
    tail = ns >= max(1, len(values) // 2)
    slope, intercept = np.polyfit(ns[tail], logs[tail], 1)
    resid = float(np.max(np.abs(slope * ns[tail] + intercept - logs[tail])))
    a_n = vals ** (1.0 / ns)
    return RadiusEstimate(
        estimate=float(np.exp(slope)),
        slope=float(slope),
        fit_residual=resid,
        sequence=tuple(float(a) for a in a_n),
        values=tuple(float(v) for v in vals),
        args=tuple(float(e.arg) for e in ests),
        window_limited=any(e.window_limited for e in ests),
        non_convergent=resid > fit_residual_max,
    )


def spectral_radius(
    op: OperatorHandle,
    n_max: int,
    x_max: float,
    samples: int = 10_001,
    fit_residual_max: float = 0.05,
) -> RadiusEstimate:
    """r(op) from the norm sequence; diagnostics flag slow or window-biased fits."""
    if n_max < 2:
        raise ValueError("need n_max >= 2 for the tail fit")
    ests = [estimate_norm(op, n, x_max, samples) for n in range(1, n_max + 1)]
    return _fit_radius(ests, fit_residual_max)


def lower_spectral_bound(
    op: OperatorHandle,
    n_max: int,
    x_max: float,
    samples: int = 10_001,
    fit_residual_max: float = 0.05,
) -> RadiusEstimate:
    """r_1(op) = lim m(op^n)^(1/n), same fitting scheme on the lower moduli."""
    if n_max < 2:
        raise ValueError("need n_max >= 2 for the tail fit")
    ests = [estimate_lower_bound(op, n, x_max, samples) for n in range(1, n_max + 1)]
    return _fit_radius(ests, fit_residual_max)


def annulus(
    op: OperatorHandle, n_max: int, x_max: float, samples: int = 10_001
) -> tuple[float, float]:
    """[r_1, r]: the approximate point spectrum lives between these circles."""
    r1 = lower_spectral_bound(op, n_max, x_max, samples).estimate
    r = spectral_radius(op, n_max, x_max, samples).estimate
    return (r1, r)


@dataclass(frozen=True)
class SpectralSummary:
    r: float
    r1: float
    r_L: float
    disc_radius: float
    annulus: tuple[float, float]
    model_disc_radius: float
    window_limited: bool
    point_spectrum: str = "empty"
    adjoint_point_spectrum: str = "contains the open disc of the model radius"
    radius_note: str | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "r1": self.r1,
            "r_L": self.r_L,
            "disc_radius": self.disc_radius,
            "annulus": list(self.annulus),
            "model_disc_radius": self.model_disc_radius,
            "window_limited": self.window_limited,
            "point_spectrum": self.point_spectrum,
            "adjoint_point_spectrum": self.adjoint_point_spectrum,
            "radius_note": self.radius_note,
            "diagnostics": self.diagnostics,
        }


def spectral_summary(
    symbol: Symbol,
    t: float,
    n_max: int = 32,
    x_max: float | None = None,
    samples: int = 10_001,
    eps_inv: float = 1e-6,
) -> SpectralSummary:
    """Full spectral picture for S_t: radius, annulus, model disc, diagnostics."""
    if x_max is None:
        x_max = 64.0 * t
    op_s = make_operator(symbol, t, "S")
    fit_r = spectral_radius(op_s, n_max, x_max, samples)
    fit_r1 = lower_spectral_bound(op_s, n_max, x_max, samples)
    op_l = make_operator(symbol, t, "L", x_max=x_max, eps_inv=eps_inv)
    fit_l = spectral_radius(op_l, n_max, x_max, samples)
    note = None
    if symbol.name == "exp":
        a = float(symbol.param)
        note = (
            "square-root-consistent radii in use: ||L_t^n|| = a**(-nt/2) gives "
            f"r(L_t) = a**(-t/2) = {a ** (-t / 2.0):.9g} and model disc radius "
            f"a**(t/2) = {a ** (t / 2.0):.9g}; the kernel coefficient a**(-nt) "
            f"converges exactly for |z conj(lambda)| < a**t = {a ** t:.9g}"
        )
    exact_radius = symbol.model_disc_radius(t)
    return SpectralSummary(
        r=fit_r.estimate,
        r1=fit_r1.estimate,
        r_L=fit_l.estimate,
        disc_radius=fit_r.estimate,
        annulus=(fit_r1.estimate, fit_r.estimate),
        model_disc_radius=exact_radius if exact_radius is not None else 1.0 / fit_l.estimate,
        window_limited=fit_r.window_limited or fit_r1.window_limited,
        radius_note=note,
        diagnostics={
            "norms": list(fit_r.values),
            "lower_moduli": list(fit_r1.values),
            "a_n": list(fit_r.sequence),
            "m_n_roots": list(fit_r1.sequence),
            "arg_sup": list(fit_r.args),
            "arg_inf": list(fit_r1.args),
            "fit_residual_r": fit_r.fit_residual,
            "fit_residual_r1": fit_r1.fit_residual,
            "non_convergent": fit_r.non_convergent or fit_r1.non_convergent,
            "window_limited_r": fit_r.window_limited,
            "window_limited_r1": fit_r1.window_limited,
            "n_max": n_max,
            "x_max": x_max,
        },
    )


# ---------------------------------------------------------------------------
# Circular symmetry of the spectrum
# ---------------------------------------------------------------------------


def _phase_factors(breakpoints: np.ndarray, theta: float, rule: str) -> np.ndarray:
    """Per-cell representation of multiplication by exp(i theta x)."""
    if theta == 0.0:
        return np.ones(breakpoints.size - 1, dtype=complex)
    if rule == "midpoint":
        mids = 0.5 * (breakpoints[:-1] + breakpoints[1:])
        return np.exp(1j * theta * mids)
    if rule == "average":
        a = breakpoints[:-1]
        b = breakpoints[1:]
        return (np.exp(1j * theta * b) - np.exp(1j * theta * a)) / (1j * theta * (b - a))
    raise ValueError("phase rule must be 'midpoint' or 'average'")


def verify_circular_symmetry(
    symbol: Symbol,
    t: float,
    theta: float,
    f: StepFunction,
    phase_rule: str = "midpoint",
) -> float:
    """Residual || M_theta* S_t M_theta f - e^{-i theta t} S_t f ||.

    With midpoint phases the conjugation identity cancels cell by cell, so
    the residual sits at rounding level on any mesh: the identity is exact
    for the discretized operators by construction. The "average" rule
    represents each phase by its exact cell mean instead; then the residual
    measures the genuine O(h^2) cost of representing exp(i theta x) f on a
    step mesh and decreases at second order under mesh refinement.
    """
    op = OperatorHandle(symbol, t, "S")
    if f.values.size == 0:
        return 0.0
    fwd = _phase_factors(f.breakpoints, theta, phase_rule)
    g = apply(op, f.with_values(f.values * fwd))
    back = _phase_factors(g.breakpoints, -theta, phase_rule)
    lhs = g.with_values(g.values * back)
    rhs = apply(op, f).scale(np.exp(-1j * theta * t))
    return norm(lhs - rhs)


# ---------------------------------------------------------------------------
# Adjoint eigenvectors and point-spectrum falsification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdjointEigenResult:
    residual: float  # ||S_t* v - conj(w) v|| / ||v||
    n_terms: int
    w: complex


def verify_adjoint_eigenvector(
    symbol: Symbol,
    t: float,
    w: complex,
    e: StepFunction,
    tol: float = 1e-8,
    n_terms: int | None = None,
    n_cap: int = 10_000,
) -> AdjointEigenResult:
    """Build v = sum conj(w)^n (L_t*)^n e and measure the eigen relation.

    The truncation index comes from the geometric tail rule at `tol` unless
    n_terms pins it explicitly; the residual is then |w|^(N+1)||(L*)^N e||
    over ||v|| up to rounding.
    """
    op_ladj = make_operator(symbol, t, "L_adjoint")
    op_sadj = OperatorHandle(symbol, t, "S_adjoint")
    if n_terms is not None:
        w_bar = np.conj(complex(w))
        v = None
        for n in range(n_terms + 1):
            term = apply_power(op_ladj, n, e).scale(w_bar**n)
            v = term if v is None else v + term
        used = n_terms + 1
    else:
        v = kernel_preimage(symbol, t, w, e, tol=tol, n_cap=n_cap)
        used = -1
    resid = norm(apply(op_sadj, v) - v.scale(np.conj(complex(w)))) / norm(v)
    return AdjointEigenResult(resid, used, complex(w))


def point_spectrum_floor(
    symbol: Symbol,
    t: float,
    lambdas,
    test_functions,
) -> float:
    """min over tested (lambda, f) of ||(S_t - lambda) f|| for unit f.

    A falsification harness for emptiness of the point spectrum: no tested
    pair should push the residual toward zero.
    """
    op = OperatorHandle(symbol, t, "S")
    best = np.inf
    for f in test_functions:
        u = f.scale(1.0 / norm(f))
        su = apply(op, u)
        for lam in lambdas:
            best = min(best, norm(su - u.scale(complex(lam))))
    return float(best)


def nonsurjectivity_residual(symbol: Symbol, t: float, basis: list[StepFunction]) -> float:
    """Distance from chi_[0,t) to the span of {S_t b : b in basis}.

    The range of S_t sits in chi_[t,inf) L2, orthogonal to chi_[0,t), so the
    projection is zero and the residual equals ||chi_[0,t)||: zero is in the
    spectrum because S_t is not onto.
    """
    op = OperatorHandle(symbol, t, "S")
    target = indicator(0.0, t)
    images = [apply(op, b) for b in basis]
    gram = np.array([[inner(u, v) for v in images] for u in images])
    rhs = np.array([inner(target, u) for u in images])
    coeffs, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    proj = None
    for c, u in zip(coeffs, images):
        proj = u.scale(c) if proj is None else proj + u.scale(c)
    return norm(target - proj) if proj is not None else norm(target)

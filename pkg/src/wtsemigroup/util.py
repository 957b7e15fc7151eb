"""Small numeric helpers: extremum refinement, quadrature, series tails."""

from __future__ import annotations

import numpy as np

from .errors import TailBoundNotAchievedError

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0


def golden_max(fn, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """Golden-section maximization of a scalar function on [lo, hi]."""
    a, b = float(lo), float(hi)
    if not b > a:
        return a, float(fn(a))
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = float(fn(c))
    fd = float(fn(d))
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = float(fn(c))
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = float(fn(d))
    return (c, fc) if fc >= fd else (d, fd)


def golden_min(fn, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    x, v = golden_max(lambda y: -fn(y), lo, hi, iters=iters)
    return x, -v


# Gauss-Legendre 5-point rule on [-1, 1]; used where an integral must not
# collapse onto the midpoint rule that the operator discretization uses.
_GL5_NODES = np.array(
    [
        -0.9061798459386640,
        -0.5384693101056831,
        0.0,
        0.5384693101056831,
        0.9061798459386640,
    ]
)
_GL5_WEIGHTS = np.array(
    [
        0.2369268850561891,
        0.4786286704993665,
        0.5688888888888889,
        0.4786286704993665,
        0.2369268850561891,
    ]
)


def gauss5_cells(fn, lefts: np.ndarray, rights: np.ndarray) -> np.ndarray:
    """Integral of fn over each cell [lefts_i, rights_i) by 5-point Gauss."""
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    mid = 0.5 * (lefts + rights)
    half = 0.5 * (rights - lefts)
    pts = mid[:, None] + half[:, None] * _GL5_NODES[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL5_WEIGHTS)


def sum_series(term_fn, tol: float, n_cap: int = 10_000, consecutive: int = 5):
    """Sum term_fn(0) + term_fn(1) + ... with an empirical geometric tail bound.

    Stops once the term-ratio has stayed below 1 for `consecutive` steps and
    the geometric tail estimate |term_N| * rho / (1 - rho) drops below tol.
    Returns (value, n_terms, tail_estimate); raises TailBoundNotAchievedError
    when the cap is hit first.
    """
    total = 0j
    prev: float | None = None
    ratios: list[float] = []
    streak = 0
    tail = np.inf
    for n in range(n_cap + 1):
        term = complex(term_fn(n))
        total += term
        mag = abs(term)
        if prev is not None:
            if prev == 0.0:
                rho = 0.0 if mag == 0.0 else np.inf
            else:
                rho = mag / prev
            ratios.append(rho)
            streak = streak + 1 if rho < 1.0 else 0
        if streak >= consecutive:
            rho = max(ratios[-consecutive:])
            tail = mag * rho / (1.0 - rho) if rho > 0.0 else 0.0
            if tail < tol:
                return total, n + 1, tail
        prev = mag
    raise TailBoundNotAchievedError(n_cap + 1, float(tail), tol)


def fmt17(x: float) -> str:
    """Format with 17 significant digits (round-trip safe for float64)."""
    return f"{x:.17g}"

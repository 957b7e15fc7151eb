"""Piecewise constant elements of L2(R+), with exact pairing.

Breakpoints are explicit and finite and the function is zero outside the
recorded range, so every inner product, norm and restriction reduces to a
finite sum: there is no quadrature error on step data. Dyadic breakpoints
(Haar functions, indicators on multiples of a dyadic step) stay exact in
binary floating point, which is what makes the structural identities in the
rest of the toolkit hold with residual zero rather than "small".

Values are immutable after construction; everything here is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .util import fmt17


@dataclass(frozen=True, eq=False)
class StepFunction:
    breakpoints: np.ndarray  # strictly increasing, nonnegative
    values: np.ndarray  # complex, one per cell; implicit 0 outside
    truncated: bool = False

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if bp.ndim != 1 or vals.ndim != 1:
            raise ValueError("breakpoints and values must be 1-d")
        if not (bp.size == vals.size + 1 or (bp.size == 1 and vals.size == 0)):
            raise ValueError("need one more breakpoint than values")
        if bp.size and bp[0] < 0:
            raise ValueError("support must lie in the half line")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(vals))):
            raise ValueError("breakpoints and values must be finite")
        bp = bp.copy()
        vals = vals.copy()
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    # -- basic queries -----------------------------------------------------

    @property
    def lo(self) -> float:
        return float(self.breakpoints[0]) if self.values.size else 0.0

    @property
    def hi(self) -> float:
        return float(self.breakpoints[-1]) if self.values.size else 0.0

    @property
    def support(self) -> tuple[float, float] | None:
        """Bounding interval of the nonzero cells, or None for the zero function."""
        nz = np.nonzero(self.values != 0)[0]
        if nz.size == 0:
            return None
        return float(self.breakpoints[nz[0]]), float(self.breakpoints[nz[-1] + 1])

    def is_zero(self) -> bool:
        return self.values.size == 0 or bool(np.all(self.values == 0))

    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.breakpoints[:-1] + self.breakpoints[1:])

    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def values_at_left_edges(self, edges: np.ndarray) -> np.ndarray:
        """Cell values for cells starting at the given left edges (0 outside)."""
        idx = np.searchsorted(self.breakpoints, edges, side="right") - 1
        out = np.zeros(edges.shape, dtype=complex)
        ok = (idx >= 0) & (idx < self.values.size)
        out[ok] = self.values[idx[ok]]
        return out

    # -- algebra -----------------------------------------------------------

    def with_values(self, new_values) -> "StepFunction":
        return StepFunction(self.breakpoints, new_values, truncated=self.truncated)

    def scale(self, c: complex) -> "StepFunction":
        if self.values.size == 0 or c == 0:
            return zero()
        return self.with_values(self.values * c)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if self.values.size == 0:
            return other
        if other.values.size == 0:
            return self
        bp = np.unique(np.concatenate([self.breakpoints, other.breakpoints]))
        left = bp[:-1]
        vals = self.values_at_left_edges(left) + other.values_at_left_edges(left)
        return _trimmed(bp, vals, self.truncated or other.truncated)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + other.scale(-1.0)

    def __neg__(self):
        return self.scale(-1.0)

    # -- geometry ----------------------------------------------------------

    def restrict(self, lo: float, hi: float) -> "StepFunction":
        """Pointwise multiplication by the indicator of [lo, hi); exact cuts."""
        if self.values.size == 0 or hi <= lo:
            return zero()
        a = max(lo, self.lo)
        b = min(hi, self.hi)
        if b <= a:
            return zero()
        inner_bp = self.breakpoints[(self.breakpoints > a) & (self.breakpoints < b)]
        bp = np.concatenate([[a], inner_bp, [b]])
        vals = self.values_at_left_edges(bp[:-1])
        return _trimmed(bp, vals, self.truncated)

    def translate(self, shift: float) -> "StepFunction":
        """Shift the graph by `shift`; a left shift clips exactly at 0."""
        if self.values.size == 0:
            return self
        bp = self.breakpoints + shift
        vals = self.values
        keep = np.diff(bp) > 0
        if not np.all(keep):
            # rounding can collapse an ulp-wide cell onto a single breakpoint;
            # such a cell carries no mass, dropping it is exact
            vals = vals[keep]
            if vals.size == 0:
                return zero()
            bp = np.concatenate([bp[:1], bp[1:][keep]])
        if bp[0] < 0:
            idx = int(np.searchsorted(bp, 0.0, side="right"))
            if idx >= bp.size:
                return zero()
            bp = np.concatenate([[0.0], bp[idx:]])
            vals = vals[idx - 1 :]
        return StepFunction(bp, vals, truncated=self.truncated)

    def subdivide(self, m: int) -> "StepFunction":
        """Split every cell into m equal parts; same function, finer mesh."""
        if m <= 1 or self.values.size == 0:
            return self
        bp = self.breakpoints
        pieces = [np.linspace(bp[i], bp[i + 1], m + 1)[:-1] for i in range(bp.size - 1)]
        pieces.append(bp[-1:])
        return StepFunction(
            np.concatenate(pieces), np.repeat(self.values, m), truncated=self.truncated
        )

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [float(b) for b in self.breakpoints],
            "values_re": [float(v.real) for v in self.values],
            "values_im": [float(v.imag) for v in self.values],
            "truncated": self.truncated,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "StepFunction":
        vals = np.asarray(d["values_re"], dtype=float) + 1j * np.asarray(
            d["values_im"], dtype=float
        )
        return StepFunction(np.asarray(d["breakpoints"], dtype=float), vals, d.get("truncated", False))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "StepFunction":
        return StepFunction.from_json_dict(json.loads(text))

    def to_csv(self) -> str:
        """One row per cell `breakpoint,re,im`; final row carries the last breakpoint."""
        lines = ["breakpoint,re,im"]
        for i, v in enumerate(self.values):
            lines.append(f"{fmt17(self.breakpoints[i])},{fmt17(v.real)},{fmt17(v.imag)}")
        lines.append(f"{fmt17(self.breakpoints[-1])},,")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str) -> "StepFunction":
        rows = [r for r in text.strip().splitlines() if r and not r.startswith("breakpoint")]
        bps = []
        vals = []
        for row in rows:
            b, re_s, im_s = row.split(",")
            bps.append(float(b))
            if re_s != "":
                vals.append(float(re_s) + 1j * float(im_s))
        return StepFunction(np.asarray(bps), np.asarray(vals, dtype=complex))


def _trimmed(bp: np.ndarray, vals: np.ndarray, truncated: bool = False) -> StepFunction:
    """Drop exactly-zero edge cells; collapse to the canonical zero function."""
    nz = np.nonzero(vals != 0)[0]
    if nz.size == 0:
        return zero()
    a, b = nz[0], nz[-1] + 1
    return StepFunction(bp[a : b + 1], vals[a:b], truncated=truncated)


def zero() -> StepFunction:
    return StepFunction(np.array([0.0]), np.array([], dtype=complex))


def indicator(lo: float, hi: float, value: complex = 1.0) -> StepFunction:
    return StepFunction(np.array([lo, hi], dtype=float), np.array([value], dtype=complex))


def from_cells(breakpoints: Iterable[float], values: Iterable[complex]) -> StepFunction:
    return StepFunction(np.asarray(list(breakpoints), dtype=float), np.asarray(list(values), dtype=complex))


# -- pairing ----------------------------------------------------------------


def inner(f: StepFunction, g: StepFunction) -> complex:
    """Exact L2 pairing <f, g> = integral f conj(g) over merged breakpoints."""
    if f.values.size == 0 or g.values.size == 0:
        return 0j
    lo = max(f.lo, g.lo)
    hi = min(f.hi, g.hi)
    if hi <= lo:
        return 0j
    bp = np.unique(np.concatenate([f.breakpoints, g.breakpoints]))
    bp = bp[(bp >= lo) & (bp <= hi)]
    left = bp[:-1]
    vf = f.values_at_left_edges(left)
    vg = g.values_at_left_edges(left)
    return complex(np.sum(vf * np.conj(vg) * np.diff(bp)))


def norm_sq(f: StepFunction) -> float:
    if f.values.size == 0:
        return 0.0
    return float(np.sum(np.abs(f.values) ** 2 * f.widths()))


def norm(f: StepFunction) -> float:
    return float(np.sqrt(norm_sq(f)))


def distance(f: StepFunction, g: StepFunction) -> float:
    return norm(f - g)


def restrict_to_E(f: StepFunction, t: float) -> StepFunction:
    """Orthogonal projection onto E = chi_[0,t) L2: exact truncation."""
    if not t > 0:
        raise ValueError("t must be positive")
    return f.restrict(0.0, t)


# -- Haar system -------------------------------------------------------------


def haar(j: int, k: int) -> StepFunction:
    """Haar function psi_jk(x) = 2**(j/2) psi(2**j x - k) restricted to R+.

    psi is +1 on [0, 1/2), -1 on [1/2, 1). Breakpoints are dyadic rationals,
    exact in floating point, so the family is orthonormal with exact zero
    off-diagonal pairings.
    """
    if k < 0:
        raise ValueError("shift k must be nonnegative")
    lo = float(np.ldexp(float(k), -j))
    mid = float(np.ldexp(float(2 * k + 1), -j - 1))
    hi = float(np.ldexp(float(k + 1), -j))
    amp = float(np.sqrt(np.ldexp(1.0, j)))
    return StepFunction(np.array([lo, mid, hi]), np.array([amp, -amp], dtype=complex))


def random_step(
    rng: np.random.Generator,
    lo: float,
    hi: float,
    cells: int,
    complex_values: bool = True,
    unit_norm: bool = False,
) -> StepFunction:
    """Random step function on a uniform mesh; deterministic given the rng."""
    bp = np.linspace(lo, hi, cells + 1)
    vals = rng.standard_normal(cells)
    if complex_values:
        vals = vals + 1j * rng.standard_normal(cells)
    f = StepFunction(bp, vals)
    if unit_norm:
        f = f.scale(1.0 / norm(f))
    return f

"""Run configuration shared by the CLI and the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

DEFAULT_TOLERANCES = {
    # identities that cancel cell by cell under the midpoint rule; on dyadic
    # meshes they sit at rounding level, on non-dyadic meshes ulp-wide cell
    # slivers under translate-and-return cost a few orders more
    "semigroup_law": 1e-6,
    "adjoint_pairing": 1e-6,
    "left_inverse": 1e-6,
    "parseval_pullback": 1e-6,
    "intertwining": 1e-6,
    "reproducing": 1e-6,
    "circular_symmetry": 1e-6,
    # exact-by-construction support facts: no tolerance at all
    "analyticity_support": 0.0,
    "adjoint_kernel": 0.0,
    "block_orthogonality": 0.0,
    # genuinely discretization- or truncation-limited checks;
    # parseval_quadrature is anchored at h = t/256 and rescales by (h / anchor)^2
    "parseval_quadrature": 1e-6,
    "adjoint_eigenvector": 1e-6,
    "bracket_agreement": 1e-6,
    "kernel_agreement": 1e-8,
}


@dataclass
class RunConfig:
    """Single static record passed down to every command; no global state."""

    phi: str = "const:1"
    t: float = 1.0
    x_max: float | None = None  # default 64 t
    h: float | None = None  # default t / 256
    n_max: int = 32
    series_cap: int = 10_000
    margin: float = 0.05
    eps_inv: float = 1e-6
    samples: int = 10_001
    class_order: int = 16
    class_samples: int = 4096
    tol_class: float = 1e-9
    seed: int = 0
    out: str | None = None
    fmt: str = "json"
    tol: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")
        for name, value in self.tol.items():
            if value < 0:
                raise ValueError(f"tolerance {name} must be nonnegative")

    @property
    def resolved_x_max(self) -> float:
        return self.x_max if self.x_max is not None else 64.0 * self.t

    @property
    def resolved_h(self) -> float:
        return self.h if self.h is not None else self.t / 256.0

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)

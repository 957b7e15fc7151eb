import numpy as np
import pytest

from wtsemigroup import (
    affine,
    annulus,
    constant,
    exponential,
    haar,
    indicator,
    kernel_series,
    lower_spectral_bound,
    make_kernel,
    make_operator,
    nonsurjectivity_residual,
    norm,
    piecewise_cap,
    point_spectrum_floor,
    random_step,
    reciprocal,
    spectral_radius,
    spectral_summary,
    verify_adjoint_eigenvector,
    verify_circular_symmetry,
)
from wtsemigroup.errors import TailBoundNotAchievedError

E2X = exponential(np.exp(2.0))


def test_radius_constant_symbol():
    op = make_operator(constant(1.0), 1.0, "S")
    fit = spectral_radius(op, 16, 64.0)
    assert fit.estimate == pytest.approx(1.0, abs=1e-12)
    assert not fit.non_convergent


def test_radius_exponential_exact_norms():
    op = make_operator(E2X, 1.0, "S")
    fit = spectral_radius(op, 32, 64.0)
    assert fit.estimate == pytest.approx(np.e, abs=1e-9)
    # norms are e^{nt} on the nose (values[i] holds n = i + 1)
    assert fit.values[2] == pytest.approx(np.exp(3.0), rel=1e-13)


def test_radius_affine_slow_convergence():
    op = make_operator(affine(), 1.0, "S")
    fit = spectral_radius(op, 64, 64.0)
    assert abs(fit.estimate - 1.0) < 0.02
    # norms sqrt(1 + n) exactly, sup attained at the left edge
    assert fit.values[0] == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_lower_bound_constant():
    op = make_operator(constant(1.0), 1.0, "S")
    assert lower_spectral_bound(op, 16, 64.0).estimate == pytest.approx(1.0, abs=1e-12)


def test_lower_bound_exponential():
    op = make_operator(E2X, 1.0, "S")
    assert lower_spectral_bound(op, 32, 64.0).estimate == pytest.approx(np.e, abs=1e-9)


def test_lower_bound_power_symbol():
    # a = 4, t = 0.5: the weight is the constant a^{t/2}, so r1 = 4^{1/4}
    op = make_operator(exponential(4.0), 0.5, "S")
    fit = lower_spectral_bound(op, 32, 32.0)
    assert fit.estimate == pytest.approx(np.sqrt(2.0), abs=1e-9)


def test_annulus_degenerates_to_circle():
    op = make_operator(constant(1.0), 1.0, "S")
    inner_r, outer_r = annulus(op, 16, 64.0)
    assert inner_r == pytest.approx(1.0, abs=1e-9)
    assert outer_r == pytest.approx(1.0, abs=1e-9)


def test_annulus_exponential():
    op = make_operator(E2X, 0.5, "S")
    inner_r, outer_r = annulus(op, 32, 32.0)
    assert inner_r == pytest.approx(np.exp(0.5), abs=1e-6)
    assert outer_r == pytest.approx(np.exp(0.5), abs=1e-6)


@pytest.mark.parametrize(
    "sym,t",
    [
        (constant(1.0), 1.0),
        (affine(), 1.0),
        (reciprocal(), 1.0),
        (piecewise_cap(), 0.25),
        (exponential(2.0), 1.0),
    ],
)
def test_r1_below_r(sym, t):
    summary = spectral_summary(sym, t, n_max=24)
    assert 0.0 < summary.r1 <= summary.r * (1.0 + 1e-12)
    assert summary.model_disc_radius > 0.0
    assert summary.point_spectrum == "empty"


def test_summary_affine_window_limited():
    summary = spectral_summary(affine(), 1.0, n_max=64, x_max=64.0)
    assert summary.window_limited
    assert summary.diagnostics["window_limited_r1"]
    assert not summary.diagnostics["window_limited_r"]


def test_summary_exponential_radius_note():
    summary = spectral_summary(exponential(2.0), 1.0)
    assert summary.radius_note is not None
    assert summary.model_disc_radius == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert summary.r_L == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-9)


def test_kernel_radius_consistency():
    # inside the disc the tail rule certifies convergence; outside, on the
    # closed-form examples, the terms stop decreasing
    k = make_kernel(constant(1.0), 1.0, margin=0.05)
    r = k.radius * (1.0 - 0.05)
    value, n_terms, tail = kernel_series(k, r, r, 0.0)
    assert np.isfinite(value.real) and n_terms < 10_000
    bad = k.radius * (1.0 + 0.05)
    with pytest.raises(TailBoundNotAchievedError):
        kernel_series(k, bad, bad, 0.0, check_domain=False, n_cap=2000)


# ---------------------------------------------------------------------------
# circular symmetry
# ---------------------------------------------------------------------------


def test_circular_symmetry_theta_zero_exact():
    rng = np.random.default_rng(0)
    f = random_step(rng, 0.0, 4.0, 64)
    assert verify_circular_symmetry(affine(), 1.0, 0.0, f) == 0.0


def test_circular_symmetry_midpoint_cancels():
    rng = np.random.default_rng(1)
    f = random_step(rng, 0.0, 4.0, 4 * 256, unit_norm=True)
    for sym, t, theta in (
        (constant(1.0), 1.0, np.pi),
        (affine(), 0.5, 2.0),
        (E2X, 1.0, 5.3),
    ):
        assert verify_circular_symmetry(sym, t, theta, f, phase_rule="midpoint") < 1e-12


def test_circular_symmetry_average_rule_second_order():
    rng = np.random.default_rng(2)
    t = 0.5
    f = random_step(rng, 0.0, 8 * t, 8 * 128, unit_norm=True)
    theta = 2.0
    e1 = verify_circular_symmetry(affine(), t, theta, f, phase_rule="average")
    e2 = verify_circular_symmetry(affine(), t, theta, f.subdivide(2), phase_rule="average")
    assert 1.8 < np.log2(e1 / e2) < 2.2
    # the residual is the exact sinc^2 defect times ||S_t f||
    h = t / 128
    u = theta * h / 2.0
    predicted = abs(1.0 - (np.sin(u) / u) ** 2)
    assert e1 == pytest.approx(predicted * norm(f) , rel=0.2)


# ---------------------------------------------------------------------------
# adjoint eigenvectors, point spectrum, surjectivity defect
# ---------------------------------------------------------------------------


def test_adjoint_eigenvector_w_zero():
    res = verify_adjoint_eigenvector(constant(1.0), 1.0, 0.0, indicator(0.0, 1.0), n_terms=0)
    assert res.residual == 0.0


def test_adjoint_eigenvector_constant_explicit_truncation():
    # residual = |w|^{N+1} ||(L*)^N e|| / ||v||, a pure geometric tail
    res = verify_adjoint_eigenvector(constant(1.0), 1.0, 0.5, indicator(0.0, 1.0), n_terms=40)
    expected = 0.5**41 / np.sqrt(sum(0.25**n for n in range(41)))
    assert res.residual == pytest.approx(expected, rel=1e-9)
    assert res.residual < 1e-9


def test_adjoint_eigenvector_exponential_tail_rule():
    # w = 1.5 < e = 1/r(L_t): per-term ratio 1.5/e
    res = verify_adjoint_eigenvector(E2X, 1.0, 1.5, indicator(0.0, 1.0), tol=1e-8)
    assert res.residual < 1e-6


def test_point_spectrum_stays_empty():
    rng = np.random.default_rng(3)
    fs = [random_step(rng, 0.0, 4.0, 64) for _ in range(5)] + [haar(0, 0), indicator(0.0, 1.0)]
    lambdas = [0.0, 0.3, -0.5, 0.9j, 0.7 + 0.4j, 1.0, -1.0]
    floor = point_spectrum_floor(affine(), 1.0, lambdas, fs)
    assert floor > 1e-12


def test_zero_in_spectrum_projection_residual():
    # range of S_t misses chi_[0,t) entirely: residual equals its norm
    basis = [haar(j, k) for j in (-1, 0, 1) for k in range(4)]
    res = nonsurjectivity_residual(affine(), 0.5, basis)
    assert res >= (1.0 - 1e-9) * norm(indicator(0.0, 0.5))

import numpy as np
import pytest

from wtsemigroup import (
    NonPositiveSymbolError,
    SymbolSyntaxError,
    WeightFunction,
    affine,
    check_left_invertible,
    constant,
    eval_phi,
    eval_weight,
    exponential,
    expression_to_string,
    parse_phi_spec,
    parse_symbol,
    piecewise_cap,
    reciprocal,
    validate_positivity,
)


def test_parse_affine_tree():
    s = parse_symbol("x+1")
    assert s(2.0) == 3.0


def test_parse_exp_tree():
    s = parse_symbol("exp(2*x)")
    assert s(0.0) == 1.0
    assert s(1.0) == pytest.approx(np.exp(2.0), abs=1e-12)


def test_parse_reciprocal_tree():
    s = parse_symbol("1/(x+1)")
    assert s(1.0) == 0.5


@pytest.mark.parametrize(
    "text",
    ["x+1", "exp(2*x)", "1/(x+1)", "x*x - 2*x + 3", "(x+1)^2", "2^x", "x/(x+1)/(x+2)", "exp(log(x+1)*0.5)", "-x+5", "3.5e-1*x+1"],
)
def test_print_parse_roundtrip_bit_exact(text):
    tree = parse_symbol(text)
    printed = expression_to_string(tree.expr)
    again = parse_symbol(printed)
    rng = np.random.default_rng(0)
    x = rng.uniform(0.0, 50.0, size=1000)
    v1 = tree.values(x)
    v2 = again.values(x)
    assert np.array_equal(v1, v2)


def test_syntax_error_carries_position():
    with pytest.raises(SymbolSyntaxError) as ei:
        parse_symbol("x+*2")
    assert ei.value.position == 2


def test_unknown_identifier():
    with pytest.raises(SymbolSyntaxError):
        parse_symbol("x+y")


def test_unbalanced_paren():
    with pytest.raises(SymbolSyntaxError):
        parse_symbol("exp(x")


def test_eval_phi_constant():
    assert eval_phi(constant(1.0), 7.3) == 1.0


def test_eval_phi_piecewise_cap():
    cap = piecewise_cap()
    assert eval_phi(cap, 0.5) == 1.5
    assert eval_phi(cap, 3.0) == 2.0


def test_eval_phi_exponential():
    assert eval_phi(exponential(2.0), 3.0) == 8.0


def test_eval_phi_rejects_nonpositive():
    s = parse_symbol("x-2")
    with pytest.raises(NonPositiveSymbolError):
        eval_phi(s, 1.0)


def test_validate_positivity_catches_pole():
    s = parse_symbol("1/(x-2)")
    with pytest.raises(NonPositiveSymbolError):
        validate_positivity(s, 64.0)


def test_validate_positivity_ok():
    assert validate_positivity(parse_symbol("x*x+0.5"), 64.0) == pytest.approx(0.5, abs=1e-6)


def test_weight_affine_at_step():
    w = WeightFunction(affine(), 1.0)
    # oracle: sqrt(phi(1)/phi(0)) evaluated independently
    assert eval_weight(w, 1.0) == pytest.approx(np.sqrt(2.0 / 1.0), abs=1e-12)


def test_weight_zero_below_step_exactly():
    w = WeightFunction(affine(), 1.0)
    assert eval_weight(w, 0.5) == 0.0
    xs = np.linspace(0.0, 0.999, 57)
    assert np.all(eval_weight(w, xs) == 0.0)


def test_weight_exponential_constant():
    # sqrt(e^{2x} / e^{2(x-t)}) simplifies to e^t for every x >= t
    w = WeightFunction(exponential(np.exp(2.0)), 0.7)
    xs = np.linspace(0.7, 40.0, 101)
    assert np.max(np.abs(eval_weight(w, xs) - np.exp(0.7))) < 1e-12


@pytest.mark.parametrize("sym", [constant(2.0), affine(), reciprocal(), piecewise_cap(), exponential(1.7)])
def test_weight_cocycle_identity(sym):
    # phi_{t+s}(x) = phi_t(x) phi_s(x-t) for x >= s+t
    t, s = 0.6, 0.9
    wts = WeightFunction(sym, t + s)
    wt = WeightFunction(sym, t)
    ws = WeightFunction(sym, s)
    xs = np.linspace(t + s, 50.0, 211)
    lhs = eval_weight(wts, xs)
    rhs = eval_weight(wt, xs) * eval_weight(ws, xs - t)
    assert np.max(np.abs(lhs - rhs) / np.abs(lhs)) < 1e-12


def test_left_invertible_constant():
    chk = check_left_invertible(constant(3.0), 1.0, 64.0)
    assert chk.ok
    assert chk.inf_estimate == pytest.approx(1.0, abs=1e-14)


def test_left_invertible_exponential():
    chk = check_left_invertible(exponential(np.exp(2.0)), 1.0, 64.0)
    assert chk.ok
    assert chk.inf_estimate == pytest.approx(np.exp(2.0), rel=1e-12)


def test_left_invertible_reciprocal():
    # ratio phi(x+1)/phi(x) = (x+1)/(x+2) increases toward 1, so the sampled
    # infimum over [0, 100] sits at x = 0 with value 1/2 (still comfortably
    # above the threshold, hence left invertible)
    chk = check_left_invertible(reciprocal(), 1.0, 100.0)
    assert chk.ok
    assert chk.inf_estimate == pytest.approx(0.5, abs=1e-12)
    assert chk.arg_inf == pytest.approx(0.0, abs=1e-9)


def test_not_left_invertible_steep_decay():
    # ratio exp(-16) sits below the default threshold 1e-6
    chk = check_left_invertible(parse_symbol("exp(0-16*x)"), 1.0, 2.0)
    assert not chk.ok
    assert chk.inf_estimate == pytest.approx(np.exp(-16.0), rel=1e-9)


@pytest.mark.parametrize(
    "spec,x,expected",
    [
        ("const:1", 5.0, 1.0),
        ("affine", 2.0, 3.0),
        ("reciprocal", 1.0, 0.5),
        ("cap", 0.25, 1.25),
        ("exp:a=2", 3.0, 8.0),
        ("exp:2", 3.0, 8.0),
        ("expr:x+1", 2.0, 3.0),
    ],
)
def test_parse_phi_spec(spec, x, expected):
    assert parse_phi_spec(spec)(x) == pytest.approx(expected, abs=1e-12)


def test_parse_phi_spec_exp2x_alias():
    s = parse_phi_spec("exp2x")
    assert s(1.0) == pytest.approx(np.exp(2.0), rel=1e-14)


def test_parse_phi_spec_unknown():
    with pytest.raises(SymbolSyntaxError):
        parse_phi_spec("fancy:1")


def test_evaluation_deterministic():
    s = parse_symbol("exp(x/3)*(x+1)^2")
    xs = np.linspace(0.0, 64.0, 1000)
    assert np.array_equal(s.values(xs), s.values(xs.copy()))

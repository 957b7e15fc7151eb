"""Symbols phi on the half line and the translation weights they generate.

A symbol is a positive continuous function on [0, inf). Built-ins cover the
standard cases (constant, x+1, 1/(x+1), the capped affine profile, pure
exponentials a**x); anything else is parsed from a one-variable arithmetic
expression over +, -, *, /, power, exp and log. Evaluation is pure and
vectorized, so a symbol is safe to share between threads.

The weight attached to a step t is

    w_t(x) = sqrt(phi(x) / phi(x - t))   for x >= t,   0 below t,

and the k-step weight uses phi(x - k t) in the denominator.  All positivity
checking is by dense sampling on a finite window; what the symbol does past
the window is the caller's responsibility.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonPositiveSymbolError, SymbolSyntaxError
from .util import golden_min

# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str  # exp or log
    arg: object


_FUNCS = {"exp": np.exp, "log": np.log}

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            # nothing matched past the whitespace
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if bad >= len(text):
                break
            raise SymbolSyntaxError(f"unexpected character {text[bad]!r}", bad, text)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent for: expr := term (+|- term)*, term := unary (*|/ unary)*,
    unary := - unary | power, power := atom (^ unary)?, atom := num | x | f(expr) | (expr)."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise SymbolSyntaxError(f"expected {op!r}", pos, self.text)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise SymbolSyntaxError(f"unexpected {val!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return BinOp("^", base, self.unary())  # right associative
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val == "x":
                return Var()
            if val in _FUNCS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            raise SymbolSyntaxError(f"unknown identifier {val!r}", pos, self.text)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise SymbolSyntaxError(f"unexpected {val!r}" if val else "unexpected end of input", pos, self.text)


def _eval_node(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval_node(node.arg, x)
    if isinstance(node, Call):
        return _FUNCS[node.func](_eval_node(node.arg, x))
    left = _eval_node(node.left, x)
    right = _eval_node(node.right, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    return np.power(left, right)


_PREC = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}


def _to_string(node, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        inner = _to_string(node.arg, 25)
        s = f"-{inner}"
        return f"({s})" if parent_prec > 10 else s
    if isinstance(node, Call):
        return f"{node.func}({_to_string(node.arg)})"
    prec = _PREC[node.op]
    left = _to_string(node.left, prec, right_side=False)
    right = _to_string(node.right, prec, right_side=True)
    s = f"{left}{node.op}{right}"
    # parenthesize when binding would change: lower precedence, or equal
    # precedence on the right of a non-associative operator
    need = prec < parent_prec or (prec == parent_prec and right_side and node.op in "-/^")
    return f"({s})" if need else s


def expression_to_string(node) -> str:
    """Print an expression tree; parse(print(tree)) evaluates identically."""
    return _to_string(node)


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------

_CLOSED_FORMS = {
    "const": "szego",
    "affine": "two_isometry",
    "reciprocal": "bergman_like",
    "cap": "piecewise_cap",
    "exp": "scaled_szego",
}


@dataclass(frozen=True)
class Symbol:
    """Positive function phi driving every weight of the semigroup."""

    name: str  # const | affine | reciprocal | cap | exp | expr
    param: Optional[float] = None
    expr: Optional[object] = None
    spec: str = ""

    def values(self, x):
        """Evaluate phi elementwise; no positivity check."""
        x = np.asarray(x, dtype=float)
        if self.name == "const":
            return np.full(x.shape, self.param, dtype=float)
        if self.name == "affine":
            return x + 1.0
        if self.name == "reciprocal":
            return 1.0 / (x + 1.0)
        if self.name == "cap":
            return np.where(x <= 1.0, x + 1.0, 2.0)
        if self.name == "exp":
            return np.power(self.param, x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = _eval_node(self.expr, x)
        return np.asarray(out, dtype=float) + np.zeros(x.shape)

    def __call__(self, x):
        if np.isscalar(x) or np.ndim(x) == 0:
            return float(self.values(np.asarray([x]))[0])
        return self.values(x)

    @property
    def closed_form(self) -> Optional[str]:
        return _CLOSED_FORMS.get(self.name)

    @property
    def kinks(self) -> list[float]:
        """Breakpoints of piecewise-defined symbols (sampling is densified there)."""
        return [1.0] if self.name == "cap" else []

    def model_disc_radius(self, t: float) -> Optional[float]:
        """Known model disc radius 1/r(L_t) for the built-in symbols.

        For a**x the norm formula gives ||L_t^n|| = a**(-n t / 2), hence
        r(L_t) = a**(-t/2) and radius a**(t/2); the kernel coefficient
        a**(-n t) then converges exactly for |z lambda| < a**t = radius**2.
        """
        if self.name in ("const", "affine", "reciprocal", "cap"):
            return 1.0
        if self.name == "exp":
            return float(self.param) ** (t / 2.0)
        return None

    def describe(self) -> str:
        return self.spec


def constant(c: float = 1.0) -> Symbol:
    if not (c > 0 and math.isfinite(c)):
        raise NonPositiveSymbolError(0.0, c)
    return Symbol("const", param=float(c), spec=f"const:{c:g}")


def affine() -> Symbol:
    return Symbol("affine", spec="affine")


def reciprocal() -> Symbol:
    return Symbol("reciprocal", spec="reciprocal")


def piecewise_cap() -> Symbol:
    return Symbol("cap", spec="cap")


def exponential(a: float) -> Symbol:
    if not (a > 0 and math.isfinite(a)):
        raise NonPositiveSymbolError(0.0, a)
    return Symbol("exp", param=float(a), spec=f"exp:a={a:g}")


def parse_symbol(text: str) -> Symbol:
    """Parse an expression in x into a symbol (no positivity check yet)."""
    tree = _Parser(text).parse()
    return Symbol("expr", expr=tree, spec=f"expr:{text}")


def parse_phi_spec(spec: str) -> Symbol:
    """Resolve a phi spec string: builtin name[:params] or expr:<expression>.

    Accepted forms: const:<c>, affine, reciprocal, cap, exp:a=<a>, exp:<a>,
    exp2x (alias for exp with a = e**2), expr:<expression>.
    """
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    head = head.strip().lower()
    if head == "expr":
        if not rest:
            raise SymbolSyntaxError("empty expression in phi spec", None, spec)
        return parse_symbol(rest)
    if head == "const":
        return constant(float(rest) if rest else 1.0)
    if head == "affine":
        return affine()
    if head in ("reciprocal", "recip"):
        return reciprocal()
    if head == "cap":
        return piecewise_cap()
    if head == "exp":
        if not rest:
            raise SymbolSyntaxError("exp needs a base, e.g. exp:a=2", None, spec)
        value = rest.partition("=")[2] if "=" in rest else rest
        return exponential(float(value))
    if head == "exp2x":
        return exponential(math.exp(2.0))
    raise SymbolSyntaxError(
        f"unknown phi spec {spec!r}; use const:<c>, affine, reciprocal, cap, "
        "exp:a=<a>, exp2x or expr:<expression>",
        None,
        spec,
    )


# ---------------------------------------------------------------------------
# Evaluation with the standing positivity hypothesis enforced
# ---------------------------------------------------------------------------


def eval_phi(symbol: Symbol, x):
    """phi(x) with the positivity hypothesis enforced at every point."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        bad = float(arr.flat[np.argmax(arr.ravel() < 0)])
        raise ValueError(f"phi is defined on the half line; got x={bad}")
    vals = symbol.values(arr)
    good = np.isfinite(vals) & (vals > 0)
    if not np.all(good):
        i = int(np.argmin(good.ravel()))
        raise NonPositiveSymbolError(float(arr.ravel()[i]), float(vals.ravel()[i]))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(vals.flat[0])
    return vals


@dataclass(frozen=True)
class WeightFunction:
    """w_t(x) = sqrt(phi(x)/phi(x-t)) for x >= t, exactly 0 below t."""

    base: Symbol
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("translation step t must be positive")


def eval_weight(w: WeightFunction, x):
    arr = np.asarray(x, dtype=float)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    arr = np.atleast_1d(arr)
    out = np.zeros(arr.shape, dtype=float)
    mask = arr >= w.t
    if np.any(mask):
        xm = arr[mask]
        out[mask] = np.sqrt(eval_phi(w.base, xm) / eval_phi(w.base, xm - w.t))
    return float(out[0]) if scalar else out


def validate_positivity(
    symbol: Symbol, x_max: float, samples: int = 10_000, floor: float = 1e-6
) -> float:
    """Sample phi on [0, x_max]; raise on any non-positive or non-finite value.

    Values below `floor` trigger a local refinement pass so that narrow dips
    in user expressions are not missed by the uniform grid.
    """
    grid = np.linspace(0.0, x_max, samples)
    vals = eval_phi(symbol, grid)  # raises on violation
    lowest = float(np.min(vals))
    suspicious = np.nonzero(vals < floor)[0]
    for i in suspicious:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, samples - 1)]
        fine = np.linspace(lo, hi, 200)
        lowest = min(lowest, float(np.min(eval_phi(symbol, fine))))
    return lowest


@dataclass(frozen=True)
class LeftInvertibilityCheck:
    ok: bool
    inf_estimate: float
    arg_inf: float
    threshold: float


def check_left_invertible(
    symbol: Symbol,
    t: float,
    x_max: float,
    samples: int = 10_001,
    eps_inv: float = 1e-6,
) -> LeftInvertibilityCheck:
    """Estimate inf over [0, x_max] of phi(x+t)/phi(x) and compare to eps_inv."""
    if not t > 0:
        raise ValueError("t must be positive")
    grid = np.linspace(0.0, x_max, samples)

    def ratio(x):
        x = np.asarray(x, dtype=float)
        return eval_phi(symbol, x + t) / eval_phi(symbol, x)

    vals = ratio(grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, samples - 1)]
    arg, refined = golden_min(lambda y: float(ratio(np.asarray([y]))[0]), lo, hi)
    inf_est = min(float(vals[i]), refined)
    if refined < vals[i]:
        arg_inf = float(arg)
    else:
        arg_inf = float(grid[i])
    return LeftInvertibilityCheck(inf_est > eps_inv, inf_est, arg_inf, eps_inv)

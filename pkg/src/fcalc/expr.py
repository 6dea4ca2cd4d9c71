"""Expression trees for real functions of one variable.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := number | 'x' | ident '(' expr ')' | '(' expr ')' | '-' base

with ident one of sin, cos, exp, ln, sqrt, abs.  Exponents are integer
literals only, so symbolic differentiation stays closed form.  Trees are
frozen dataclasses: structurally equal trees evaluate identically, and
sharing between threads is safe.

Evaluation accepts a float or a numpy array; the array path is what the
grid-based integrators lean on.  There is no simplification pass, only
local constant folding in the smart constructors so that repeated
differentiation does not blow the tree up.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, NonDifferentiableError, ParseError

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs")

Number = Union[float, np.ndarray]


@dataclass(frozen=True)
class Expr:
    """Base node; concrete nodes are the dataclasses below."""

    def __call__(self, x: Number) -> Number:
        return evaluate(self, x)

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return pow_(self, n)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


X = Var()


def _coerce(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(float(v))


# ---------------------------------------------------------------------------
# smart constructors (local constant folding only)

def const(v: float) -> Const:
    return Const(float(v))


def add(u: Expr, v: Expr) -> Expr:
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value + v.value)
    if isinstance(u, Const) and u.value == 0.0:
        return v
    if isinstance(v, Const) and v.value == 0.0:
        return u
    return Add(u, v)


def sub(u: Expr, v: Expr) -> Expr:
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value - v.value)
    if isinstance(v, Const) and v.value == 0.0:
        return u
    if isinstance(u, Const) and u.value == 0.0:
        return neg(v)
    return Sub(u, v)


def mul(u: Expr, v: Expr) -> Expr:
    if isinstance(u, Const) and isinstance(v, Const):
        return Const(u.value * v.value)
    if isinstance(u, Const):
        if u.value == 0.0:
            return Const(0.0)
        if u.value == 1.0:
            return v
    if isinstance(v, Const):
        if v.value == 0.0:
            return Const(0.0)
        if v.value == 1.0:
            return u
    return Mul(u, v)


def div(u: Expr, v: Expr) -> Expr:
    if isinstance(v, Const) and v.value == 1.0:
        return u
    if isinstance(u, Const) and u.value == 0.0:
        return Const(0.0)
    if isinstance(u, Const) and isinstance(v, Const) and v.value != 0.0:
        return Const(u.value / v.value)
    return Div(u, v)


def neg(u: Expr) -> Expr:
    if isinstance(u, Const):
        return Const(-u.value)
    if isinstance(u, Neg):
        return u.arg
    return Neg(u)


def pow_(u: Expr, n: int) -> Expr:
    n = int(n)
    if n == 0:
        return Const(1.0)
    if n == 1:
        return u
    if isinstance(u, Const):
        return Const(_pow_value(u.value, n))
    return Pow(u, n)


def func(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    return Func(name, arg)


# ---------------------------------------------------------------------------
# evaluation

def _pow_value(base: float, n: int) -> float:
    if n < 0 and base == 0.0:
        raise DomainError("0 raised to a negative power")
    try:
        return float(base) ** n
    except OverflowError:
        return math.inf if (base > 0 or n % 2 == 0) else -math.inf


def evaluate(e: Expr, x: Number) -> Number:
    """Evaluate `e` at `x` (float or numpy array of floats).

    Raises DomainError when the point leaves the natural domain:
    division by zero, ln of a non-positive number, sqrt of a negative
    number, or zero raised to a negative power.
    """
    if isinstance(x, np.ndarray):
        return _eval_array(e, np.asarray(x, dtype=float))
    return _eval_scalar(e, float(x))


def _eval_scalar(e: Expr, x: float) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval_scalar(e.arg, x)
    if isinstance(e, Add):
        return _eval_scalar(e.left, x) + _eval_scalar(e.right, x)
    if isinstance(e, Sub):
        return _eval_scalar(e.left, x) - _eval_scalar(e.right, x)
    if isinstance(e, Mul):
        return _eval_scalar(e.left, x) * _eval_scalar(e.right, x)
    if isinstance(e, Div):
        den = _eval_scalar(e.right, x)
        if den == 0.0:
            raise DomainError("division by zero")
        return _eval_scalar(e.left, x) / den
    if isinstance(e, Pow):
        return _pow_value(_eval_scalar(e.base, x), e.exponent)
    if isinstance(e, Func):
        v = _eval_scalar(e.arg, x)
        if e.name == "sin":
            return math.sin(v)
        if e.name == "cos":
            return math.cos(v)
        if e.name == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                return math.inf
        if e.name == "ln":
            if v <= 0.0:
                raise DomainError("ln of a non-positive number")
            return math.log(v)
        if e.name == "sqrt":
            if v < 0.0:
                raise DomainError("sqrt of a negative number")
            return math.sqrt(v)
        if e.name == "abs":
            return abs(v)
    raise TypeError(f"not an expression node: {e!r}")


def _eval_array(e: Expr, x: np.ndarray) -> np.ndarray:
    if isinstance(e, Const):
        return np.full_like(x, e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval_array(e.arg, x)
    if isinstance(e, Add):
        return _eval_array(e.left, x) + _eval_array(e.right, x)
    if isinstance(e, Sub):
        return _eval_array(e.left, x) - _eval_array(e.right, x)
    if isinstance(e, Mul):
        return _eval_array(e.left, x) * _eval_array(e.right, x)
    if isinstance(e, Div):
        den = _eval_array(e.right, x)
        if np.any(den == 0.0):
            raise DomainError("division by zero")
        return _eval_array(e.left, x) / den
    if isinstance(e, Pow):
        base = _eval_array(e.base, x)
        if e.exponent < 0 and np.any(base == 0.0):
            raise DomainError("0 raised to a negative power")
        with np.errstate(over="ignore"):
            return base ** float(e.exponent) if e.exponent >= 0 else base ** e.exponent
    if isinstance(e, Func):
        v = _eval_array(e.arg, x)
        if e.name == "sin":
            return np.sin(v)
        if e.name == "cos":
            return np.cos(v)
        if e.name == "exp":
            with np.errstate(over="ignore"):
                return np.exp(v)
        if e.name == "ln":
            if np.any(v <= 0.0):
                raise DomainError("ln of a non-positive number")
            return np.log(v)
        if e.name == "sqrt":
            if np.any(v < 0.0):
                raise DomainError("sqrt of a negative number")
            return np.sqrt(v)
        if e.name == "abs":
            return np.abs(v)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# symbolic differentiation

def differentiate(e: Expr, n: int = 1) -> Expr:
    """Symbolic n-th derivative.  n=0 returns the expression itself.

    abs is parseable but rejected here with NonDifferentiableError.
    """
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    out = e
    for _ in range(int(n)):
        out = _d(out)
    return out


def _d(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Neg):
        return neg(_d(e.arg))
    if isinstance(e, Add):
        return add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        # product rule, f'g + g'f
        return add(mul(_d(e.left), e.right), mul(_d(e.right), e.left))
    if isinstance(e, Div):
        num = sub(mul(_d(e.left), e.right), mul(_d(e.right), e.left))
        return div(num, pow_(e.right, 2))
    if isinstance(e, Pow):
        inner = mul(const(e.exponent), pow_(e.base, e.exponent - 1))
        return mul(inner, _d(e.base))
    if isinstance(e, Func):
        u, du = e.arg, _d(e.arg)
        if e.name == "sin":
            return mul(func("cos", u), du)
        if e.name == "cos":
            return neg(mul(func("sin", u), du))
        if e.name == "exp":
            return mul(func("exp", u), du)
        if e.name == "ln":
            return div(du, u)
        if e.name == "sqrt":
            return div(du, mul(const(2.0), func("sqrt", u)))
        raise NonDifferentiableError(f"cannot differentiate node {e.name!r}")
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and e.value < 0:
        return _PREC_NEG
    return _PREC_ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text = to_text(e)
    if _prec(e) < minimum:
        return f"({text})"
    return text


def to_text(e: Expr, var_name: str = "x") -> str:
    """Render to grammar-conformant text; parse(to_text(e)) evaluates like e."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return var_name
    if isinstance(e, Neg):
        return f"-{_wrap(e.arg, _PREC_NEG + 1)}"
    if isinstance(e, Add):
        return f"{_wrap(e.left, _PREC_ADD)} + {_wrap(e.right, _PREC_ADD + 1)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, _PREC_ADD)} - {_wrap(e.right, _PREC_ADD + 1)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _PREC_MUL)}*{_wrap(e.right, _PREC_MUL + 1)}"
    if isinstance(e, Div):
        return f"{_wrap(e.left, _PREC_MUL)}/{_wrap(e.right, _PREC_MUL + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg, var_name)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# recursive-descent parser

_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_]+)
    | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(), pos))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        return self.next()


def parse(text: str, var_name: str = "x") -> Expr:
    """Parse expression text into a tree.

    var_name lets the sequence front end reuse the grammar with `n` as
    the variable.  Raises ParseError with the byte offset on bad input.
    """
    toks = _Tokens(text)
    e = _parse_expr(toks, var_name)
    kind, value, offset = toks.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {value!r}", offset)
    return e


def _parse_expr(toks, var_name):
    e = _parse_term(toks, var_name)
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "+-":
            toks.next()
            rhs = _parse_term(toks, var_name)
            e = Add(e, rhs) if value == "+" else Sub(e, rhs)
        else:
            return e


def _parse_term(toks, var_name):
    e = _parse_factor(toks, var_name)
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "*/":
            toks.next()
            rhs = _parse_factor(toks, var_name)
            e = Mul(e, rhs) if value == "*" else Div(e, rhs)
        else:
            return e


def _parse_factor(toks, var_name):
    base = _parse_base(toks, var_name)
    kind, value, _ = toks.peek()
    if kind == "op" and value == "^":
        toks.next()
        base = Pow(base, _parse_integer(toks))
    return base


def _parse_integer(toks):
    sign = 1
    kind, value, offset = toks.peek()
    if kind == "op" and value == "-":
        toks.next()
        sign = -1
        kind, value, offset = toks.peek()
    if kind != "num" or not value.isdigit():
        raise ParseError("expected integer exponent", offset)
    toks.next()
    return sign * int(value)


def _parse_base(toks, var_name):
    kind, value, offset = toks.next()
    if kind == "num":
        return Const(float(value))
    if kind == "ident":
        if value == var_name:
            return Var()
        if value in FUNCTIONS:
            toks.expect_op("(")
            inner = _parse_expr(toks, var_name)
            toks.expect_op(")")
            return Func(value, inner)
        raise ParseError(f"unknown identifier {value!r}", offset)
    if kind == "op" and value == "(":
        inner = _parse_expr(toks, var_name)
        toks.expect_op(")")
        return inner
    if kind == "op" and value == "-":
        return Neg(_parse_base(toks, var_name))
    raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", offset)

"""Discretized filter-base limits, numerical differentiation, and the
mean-value/Taylor witness finders.

The filter bases behind one- and two-sided limits are discretized to a
geometric schedule of punctured windows: delta0 * shrink^j for j up to
`steps`, with a fixed number of samples per window.  Witness finders
prefer exact symbolic derivatives and fall back to numeric ones with a
100x widened tolerance.
"""

from __future__ import annotations

import bisect as _bisect
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import (
    DivergenceError,
    DomainError,
    NonDifferentiableError,
    OneSidedDisagreementError,
    PreconditionError,
)
from .expr import Expr, Var, const, differentiate, evaluate, mul, sub
from .suprema import bisect_root


@dataclass(frozen=True)
class LimitSchedule:
    """Shrinking punctured windows standing in for a filter base."""

    mode: str = "two-sided"  # 'left' | 'right' | 'two-sided'
    delta0: float = 1e-2
    shrink: float = 0.5
    steps: int = 30
    samples_per_step: int = 8

    def __post_init__(self):
        if self.mode not in ("left", "right", "two-sided"):
            raise PreconditionError(f"unknown mode {self.mode!r}")
        if not (0 < self.shrink < 1) or self.delta0 <= 0:
            raise PreconditionError("need delta0 > 0 and shrink in (0, 1)")


@dataclass
class LimitReport:
    estimate: float
    spread: float
    converged: bool
    steps_used: int = 0
    left: Optional[float] = None
    right: Optional[float] = None
    warning: Optional[str] = None


@dataclass
class TaylorReport:
    value: float
    rho: float
    witness: Optional[float]
    remainder: float
    converged: bool


def _window_offsets(delta: float, mode: str, m: int) -> np.ndarray:
    if mode == "two-sided":
        half = max(1, m // 2)
        offs = delta * np.arange(1, half + 1) / half
        return np.concatenate([-offs[::-1], offs])
    offs = delta * np.arange(1, m + 1) / m
    return offs if mode == "right" else -offs


def _scan(fn: Callable[[np.ndarray], np.ndarray], c: float, sched: LimitSchedule,
          tol: float) -> LimitReport:
    prev = None
    est = spread = math.nan
    left_est = right_est = None
    for j in range(sched.steps):
        delta = sched.delta0 * sched.shrink**j
        pts = c + _window_offsets(delta, sched.mode, sched.samples_per_step)
        pts = pts[pts != c]  # puncture survives rounding
        if pts.size == 0:
            break
        vals = fn(pts)
        est = float(np.mean(vals))
        spread = float(np.max(vals) - np.min(vals))
        if sched.mode == "two-sided":
            left_est = float(np.mean(vals[pts < c]))
            right_est = float(np.mean(vals[pts > c]))
        if prev is not None and abs(est - prev) < tol and spread < tol:
            if sched.mode == "two-sided" and abs(left_est - right_est) >= tol:
                raise OneSidedDisagreementError(left_est, right_est, tol)
            return LimitReport(est, spread, True, j + 1, left_est, right_est)
        prev = est
    if sched.mode == "two-sided" and left_est is not None and abs(left_est - right_est) >= tol:
        raise OneSidedDisagreementError(left_est, right_est, tol)
    raise DivergenceError(
        f"no convergence after {sched.steps} steps (estimate {est}, spread {spread})"
    )


def limit(f: Expr, c: float, sched: LimitSchedule = LimitSchedule(),
          tol: float = 1e-6) -> LimitReport:
    """Limit of f along the discretized filter base at c.

    Converged means successive window estimates differ by less than tol
    and the last window's spread is below tol; two-sided mode also
    requires the one-sided estimates to agree within tol.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    return _scan(lambda pts: evaluate(f, pts), c, sched, tol)


def derivative(f: Expr, c: float, sched: LimitSchedule = LimitSchedule(),
               tol: float = 1e-6) -> LimitReport:
    """Limit of the difference quotient at c, cross-checked symbolically.

    A symbolic-vs-numeric mismatch beyond 1e-4 flags ill-conditioning in
    the report's warning field rather than failing.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    fc = evaluate(f, c)

    def quotient(pts: np.ndarray) -> np.ndarray:
        return (evaluate(f, pts) - fc) / (pts - c)

    report = _scan(quotient, c, sched, tol)
    try:
        sym = evaluate(differentiate(f, 1), c)
    except (NonDifferentiableError, DomainError):
        sym = None
    if sym is not None and abs(report.estimate - sym) > 1e-4 * (1 + abs(sym)):
        report.warning = (
            f"numeric estimate {report.estimate} vs symbolic {sym}: ill-conditioned"
        )
    return report


def extreme_point(f: Expr, a: float, b: float, grid: int = 256,
                  refinements: int = 3) -> Tuple[float, float]:
    """Grid argmax with local 10x refinements; smallest x wins ties."""
    if grid < 2:
        raise PreconditionError("grid must be at least 2")
    if a > b:
        raise PreconditionError("need a <= b")
    if a == b:
        return a, evaluate(f, a)
    xs = np.linspace(a, b, grid)
    vals = evaluate(f, xs)
    best = int(np.argmax(vals))
    c, fc = float(xs[best]), float(vals[best])
    h = (b - a) / (grid - 1)
    for _ in range(refinements):
        lo, hi = max(a, c - h), min(b, c + h)
        xs = np.linspace(lo, hi, 21)
        vals = evaluate(f, xs)
        best = int(np.argmax(vals))
        if float(vals[best]) > fc or (float(vals[best]) == fc and float(xs[best]) < c):
            c, fc = float(xs[best]), float(vals[best])
        h /= 10
    return c, fc


def _numeric_diff(f: Expr, h: float = 1e-6) -> Callable[[float], float]:
    def d(t: float) -> float:
        return (evaluate(f, t + h) - evaluate(f, t - h)) / (2 * h)

    return d


def _derivative_fn(f: Expr) -> Tuple[Callable[[float], float], bool]:
    """Exact derivative when the tree allows it, else a central difference."""
    try:
        df = differentiate(f, 1)
        return (lambda t: evaluate(df, t)), True
    except NonDifferentiableError:
        return _numeric_diff(f), False


def rolle_witness(f: Expr, a: float, b: float, tol: float = 1e-8,
                  scan: int = 512) -> float:
    """Interior point where f' vanishes, given equal endpoint values.

    Scans f' for a sign change and polishes with bisection; with no sign
    change, falls back to an interior extremum of f or -f.  A function
    that is flat to within tol yields the midpoint plus a warning.
    """
    fa, fb = evaluate(f, a), evaluate(f, b)
    if abs(fa - fb) > tol * max(1.0, abs(fa)):
        raise PreconditionError(f"endpoint values differ: f({a})={fa}, f({b})={fb}")
    dfn, symbolic = _derivative_fn(f)
    eff_tol = tol if symbolic else 100 * tol
    xs = np.linspace(a, b, scan + 2)[1:-1]
    dvals = np.array([dfn(float(t)) for t in xs])
    if float(np.max(np.abs(dvals))) <= eff_tol:
        warnings.warn("derivative flat to tolerance; returning the midpoint", RuntimeWarning)
        return a + (b - a) / 2
    zero_hits = np.nonzero(dvals == 0.0)[0]
    if zero_hits.size:
        return float(xs[zero_hits[0]])
    signs = np.sign(dvals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if flips.size:
        i = int(flips[0])
        res = bisect_root(dfn, float(xs[i]), float(xs[i + 1]), 0.0,
                          tol=max(1e-13, (b - a) * 1e-13))
        return res.root
    candidates = []
    for g in (f, mul(const(-1.0), f)):
        c, _ = extreme_point(g, a, b, grid=scan, refinements=4)
        if a + (b - a) * 1e-9 < c < b - (b - a) * 1e-9:
            candidates.append(c)
    candidates.sort(key=lambda t: abs(dfn(t)))
    if candidates and abs(dfn(candidates[0])) <= eff_tol:
        return candidates[0]
    raise DivergenceError("no interior critical point located")


def mvt_witness(f: Expr, a: float, b: float, tol: float = 1e-8) -> float:
    """Point c in (a, b) where f' matches the secant slope."""
    if not a < b:
        raise PreconditionError("need a < b")
    slope = (evaluate(f, b) - evaluate(f, a)) / (b - a)
    aux = sub(f, mul(const(slope), Var()))
    c = rolle_witness(aux, a, b, tol)
    dfn, symbolic = _derivative_fn(f)
    eff_tol = tol if symbolic else 100 * tol
    if abs(dfn(c) - slope) > eff_tol:
        raise DivergenceError(f"residual |f'(c) - slope| = {abs(dfn(c) - slope)} > {eff_tol}")
    return c


def emvt_witness(f: Expr, g: Expr, a: float, b: float, tol: float = 1e-8) -> float:
    """Cauchy mean-value witness: f'(c)/g'(c) equals the increment ratio."""
    if not a < b:
        raise PreconditionError("need a < b")
    dg = differentiate(g, 1)
    xs = np.linspace(a, b, 257)[1:-1]
    dgv = evaluate(dg, xs)
    if np.any(dgv == 0.0) or np.any(dgv[:-1] * dgv[1:] < 0):
        raise PreconditionError("g' vanishes at a probe inside (a, b)")
    ga, gb = evaluate(g, a), evaluate(g, b)
    if gb == ga:
        raise PreconditionError("g(b) = g(a) contradicts a nonvanishing g'")
    fa, fb = evaluate(f, a), evaluate(f, b)
    aux = sub(
        mul(const(gb - ga), sub(f, const(fa))),
        mul(sub(g, const(ga)), const(fb - fa)),
    )
    c = rolle_witness(aux, a, b, tol)
    ratio = (fb - fa) / (gb - ga)
    df = differentiate(f, 1)
    resid = abs(evaluate(df, c) / evaluate(dg, c) - ratio)
    if resid > tol:
        raise DivergenceError(f"residual {resid} exceeds {tol}")
    return c


def taylor(f: Expr, a: float, n: int, x: float, tol: float = 1e-9) -> TaylorReport:
    """Degree-n polynomial value at x plus the order-(n+1) remainder.

    rho is fixed by the normalized truncation error; the witness c
    solves f^(n+1)(c) = rho and is located by a sign-change scan of
    (a, x).  Without a bracket the report carries rho but no witness,
    with the remainder taken from rho so the identity still closes.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    if not x > a:
        raise PreconditionError("need x > a")
    derivs = [differentiate(f, k) for k in range(n + 2)]
    h = x - a
    value = 0.0
    for k in range(n + 1):
        value += evaluate(derivs[k], a) / math.factorial(k) * h**k
    fx = evaluate(f, x)
    rho = math.factorial(n + 1) / h ** (n + 1) * (fx - value)
    top = derivs[n + 1]

    witness = None
    xs = np.linspace(a, x, 258)[1:-1]
    resid = evaluate(top, xs) - rho
    hit = np.nonzero(resid == 0.0)[0]
    if hit.size:
        witness = float(xs[hit[0]])
    else:
        flips = np.nonzero(resid[:-1] * resid[1:] < 0)[0]
        if flips.size:
            i = int(flips[0])
            witness = bisect_root(
                lambda t: evaluate(top, t), float(xs[i]), float(xs[i + 1]), rho,
                tol=max(1e-14, h * 1e-14),
            ).root
    if witness is not None:
        remainder = evaluate(top, witness) / math.factorial(n + 1) * h ** (n + 1)
    else:
        remainder = rho / math.factorial(n + 1) * h ** (n + 1)
    converged = abs(value + remainder - fx) <= tol * (1 + abs(fx))
    return TaylorReport(value, rho, witness, remainder, converged)


def polynomial_check(f: Expr, a: float, b: float, n: int, samples: int = 128,
                     tol: float = 1e-9) -> bool:
    """Is f a polynomial of degree at most n on [a, b]?

    Requires both a vanishing (n+1)-st symbolic derivative at the sample
    points and agreement with the degree-n interpolant through Chebyshev
    nodes (chosen for conditioning).
    """
    if samples < 2:
        raise PreconditionError("samples must be at least 2")
    top = differentiate(f, n + 1)
    xs = np.linspace(a, b, samples)
    if np.max(np.abs(evaluate(top, xs))) > tol:
        return False
    mid, half = (a + b) / 2, (b - a) / 2
    j = np.arange(n + 1)
    nodes = mid + half * np.cos((2 * j + 1) * math.pi / (2 * (n + 1)))
    coeffs = np.polynomial.polynomial.polyfit(nodes, evaluate(f, nodes), n)
    fs = evaluate(f, xs)
    ps = np.polynomial.polynomial.polyval(xs, coeffs)
    return bool(np.all(np.abs(fs - ps) <= tol * (1 + np.abs(fs))))


def shape_checks(f: Expr, a: float, b: float, kind: str, samples: int = 64,
                 tol: float = 1e-9, seed: int = 0):
    """Randomized convexity / monotonicity / constancy checks.

    Returns (ok, counterexample) where the counterexample is the first
    violating tuple of abscissas, or None.
    """
    if samples < 3:
        raise PreconditionError("samples must be at least 3")
    rng = np.random.default_rng(seed)
    if kind == "convex":
        for _ in range(samples):
            c, t, x = np.sort(rng.uniform(a, b, 3))
            if not (c < t < x):
                continue
            chord = evaluate(f, c) + (t - c) * (evaluate(f, x) - evaluate(f, c)) / (x - c)
            if evaluate(f, t) > chord + tol:
                return False, (float(c), float(t), float(x))
        return True, None
    if kind == "increasing":
        for _ in range(samples):
            c, x = np.sort(rng.uniform(a, b, 2))
            if not c < x:
                continue
            if evaluate(f, c) > evaluate(f, x) + tol:
                return False, (float(c), float(x))
        return True, None
    if kind == "constant":
        xs = np.linspace(a, b, samples)
        vals = evaluate(f, xs)
        if float(np.max(vals) - np.min(vals)) <= tol:
            return True, None
        return False, (float(xs[np.argmin(vals)]), float(xs[np.argmax(vals)]))
    raise PreconditionError(f"unknown kind {kind!r}")


def piecewise_linear(nodes, values) -> Callable[[float], float]:
    """Continuous interpolant through (a_k, c_k), constant c_1 to the
    left of the first node and zero beyond the last one."""
    nodes = [float(v) for v in nodes]
    values = [float(v) for v in values]
    if len(nodes) != len(values) or not nodes:
        raise PreconditionError("need equally many nodes and values, at least one")
    for u, v in zip(nodes, nodes[1:]):
        if not u < v:
            raise PreconditionError("nodes must be strictly increasing")

    def fn(x: float) -> float:
        if x <= nodes[0]:
            return values[0]
        if x > nodes[-1]:
            return 0.0
        i = _bisect.bisect_left(nodes, x)
        if nodes[i] == x:
            return values[i]
        lo, hi = nodes[i - 1], nodes[i]
        return values[i - 1] + (x - lo) / (hi - lo) * (values[i] - values[i - 1])

    return fn

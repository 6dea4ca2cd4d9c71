"""Bisection constructions: suprema of predicate sets, cut points of
downward-closed predicates, intermediate-value root finding, and the
affine interval map.

A membership oracle cannot decide "is an upper bound", so midpoints
that test non-member are *treated* as upper bounds.  That is sound for
downward-closed or interval-like sets; for a general set the result is
the supremum of the connected component of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import BracketError, IterationCapError, NonCutError, PreconditionError
from .expr import Expr, Var, add, const, evaluate, mul, sub


@dataclass(frozen=True)
class PredicateSet:
    """Bounded set given by a membership oracle.

    seed is a known element, bound a claimed upper bound; the oracle is
    never asked to certify the bound globally.
    """

    member: Callable[[float], bool]
    seed: float
    bound: float


@dataclass(frozen=True)
class Cut:
    """Downward-closed set given by a `below` oracle plus two samples."""

    below: Callable[[float], bool]
    sample_in: float
    sample_out: float


@dataclass
class SupremumResult:
    value: float
    iterations: int
    trace: List[Tuple[float, float]]


@dataclass
class RootResult:
    root: float
    iterations: int
    bracket: Tuple[float, float]
    residual: float


def bisect_supremum(pset: PredicateSet, tol: float, max_iter: int = 200) -> SupremumResult:
    """Supremum by midpoint-membership bisection.

    Keeps [a_k, b_k] with a_k a member and b_k treated as an upper
    bound, halving until b_k - a_k < tol; returns a_k.  If the declared
    bound is itself a member it is the supremum and is returned at once.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if pset.seed > pset.bound:
        raise PreconditionError("seed must not exceed bound")
    if not pset.member(pset.seed):
        raise PreconditionError("seed is not a member of the set")
    if pset.member(pset.bound):
        return SupremumResult(pset.bound, 0, [(pset.bound, pset.bound)])
    a, b = pset.seed, pset.bound
    trace = [(a, b)]
    iterations = 0
    while b - a >= tol:
        if iterations >= max_iter:
            raise IterationCapError(f"supremum bisection exceeded {max_iter} iterations")
        m = a + (b - a) / 2
        if pset.member(m):
            a = m
        else:
            b = m
        trace.append((a, b))
        iterations += 1
    return SupremumResult(a, iterations, trace)


def supremum(pset: PredicateSet, tol: float, max_iter: int = 200) -> float:
    return bisect_supremum(pset, tol, max_iter).value


def sup_witnesses(pset: PredicateSet, sup_value: float, count: int) -> List[float]:
    """Members c_1..c_count with |c_n - sup_value| < 1/n.

    Scans the bisection trace of member endpoints a_k, which climb to
    the supremum.
    """
    if count < 1:
        raise PreconditionError("count must be positive")
    tol = min(1.0 / (2 * count), 1e-3)
    res = bisect_supremum(pset, tol)
    members = [a for a, _ in res.trace] + [res.value]
    witnesses = []
    for n in range(1, count + 1):
        found = None
        for a in members:
            if abs(a - sup_value) < 1.0 / n:
                found = a
                break
        if found is None:
            raise PreconditionError(
                f"no member within 1/{n} of {sup_value}; supremum value looks inaccurate"
            )
        witnesses.append(found)
    return witnesses


def cut_point(cut: Cut, tol: float, probes: int = 64, max_iter: int = 200) -> float:
    """Boundary point of a downward-closed predicate, by bisection.

    A probe grid checks downward closure first: a `below` hit above a
    miss is a witness that the input is not a cut.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if not cut.below(cut.sample_in):
        raise NonCutError("below(sample_in) must be true")
    if cut.below(cut.sample_out):
        raise NonCutError("below(sample_out) must be false")
    lo, hi = cut.sample_in, cut.sample_out
    if lo >= hi:
        raise NonCutError("sample_in above sample_out contradicts downward closure")
    grid = np.linspace(lo, hi, max(2, probes))
    flags = [bool(cut.below(float(t))) for t in grid]
    last_true = max(i for i, f in enumerate(flags) if f)
    first_false = min(i for i, f in enumerate(flags) if not f)
    if first_false < last_true:
        raise NonCutError(
            f"predicate holds at {grid[last_true]} but fails below it at {grid[first_false]}"
        )
    a, b = float(grid[last_true]), float(grid[first_false])
    iterations = 0
    while b - a >= tol:
        if iterations >= max_iter:
            raise IterationCapError(f"cut bisection exceeded {max_iter} iterations")
        m = a + (b - a) / 2
        if cut.below(m):
            a = m
        else:
            b = m
        iterations += 1
    return a + (b - a) / 2


def bisect_root(
    fn: Callable[[float], float],
    a: float,
    b: float,
    k: float = 0.0,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> RootResult:
    """Sign-change bisection for fn(x) = k on [a, b].

    Exact hits terminate immediately.  Raises BracketError when both
    endpoint residuals share a sign.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    fa = fn(a) - k
    fb = fn(b) - k
    if fa == 0.0:
        return RootResult(a, 0, (a, a), 0.0)
    if fb == 0.0:
        return RootResult(b, 0, (b, b), 0.0)
    if (fa > 0) == (fb > 0):
        raise BracketError(f"no sign change on [{a}, {b}]: f-k = {fa} and {fb}")
    lo, hi, flo = a, b, fa
    iterations = 0
    while hi - lo > tol:
        if iterations >= max_iter:
            raise IterationCapError(f"root bisection exceeded {max_iter} iterations")
        m = lo + (hi - lo) / 2
        if m <= lo or m >= hi:
            break  # interval no longer splittable in doubles
        fm = fn(m) - k
        if fm == 0.0:
            return RootResult(m, iterations + 1, (m, m), 0.0)
        if (fm > 0) == (flo > 0):
            lo, flo = m, fm
        else:
            hi = m
        iterations += 1
    root = lo + (hi - lo) / 2
    return RootResult(root, iterations, (lo, hi), fn(root) - k)


def ivt_root_result(f: Expr, a: float, b: float, k: float, tol: float, max_iter: int = 200) -> RootResult:
    return bisect_root(lambda t: evaluate(f, t), a, b, k, tol, max_iter)


def ivt_root(f: Expr, a: float, b: float, k: float = 0.0, tol: float = 1e-12) -> float:
    """Point c in [a, b] with f(c) = k, given a sign-change bracket."""
    return ivt_root_result(f, a, b, k, tol).root


def affine_map(a0: float, b0: float, a: float, b: float) -> Expr:
    """Expression for the affine map sending [a0, b0] onto [a, b]."""
    if a0 >= b0:
        raise PreconditionError("affine_map needs a0 < b0")
    slope = (b - a) / (b0 - a0)
    return add(mul(const(slope), sub(Var(), const(a0))), const(a))

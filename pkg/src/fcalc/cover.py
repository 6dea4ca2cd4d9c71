"""Finite open covers of closed intervals.

verify_cover is an exact sweep over the endpoint structure, never a
sampling argument.  The exact Lebesgue number comes from the same
structure: for every breakpoint x the nearest unreachable partner is
the largest right endpoint over pieces containing x, so the minimum
slack over breakpoints and cells is the maximal valid delta.  The
conservative min-half-radius formula is kept as `paper` mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import CoverError, MathError, PreconditionError
from .expr import Expr, evaluate
from .interval import Interval, OpenInterval, uniform_partition
from .stepfn import StepFunction


@dataclass
class OpenCover:
    target: Interval
    pieces: List[OpenInterval]
    verified: Optional[bool] = field(default=None, compare=False)

    @classmethod
    def from_json(cls, data) -> "OpenCover":
        return cls(
            Interval(*map(float, data["target"])),
            [OpenInterval(float(lo), float(hi)) for lo, hi in data["pieces"]],
        )

    def to_json(self):
        return {"target": self.target.to_json(), "pieces": [p.to_json() for p in self.pieces]}


def _reach(cover: OpenCover, x: float) -> float:
    """Largest right endpoint over pieces strictly containing x; -inf if none."""
    best = -math.inf
    for p in cover.pieces:
        if p.lo < x < p.hi and p.hi > best:
            best = p.hi
    return best


def verify_cover(cover: OpenCover, grid: int = 16) -> Tuple[bool, Optional[float]]:
    """Exact covering check by sweeping reachability left to right.

    Returns (True, None) or (False, witness) with an uncovered point.
    The verdict is cached on the cover.
    """
    if grid < 2:
        raise PreconditionError("grid must be at least 2")
    a, b = cover.target.lo, cover.target.hi
    r = a
    for _ in range(len(cover.pieces) + 1):
        reach = _reach(cover, r)
        if reach == -math.inf:
            cover.verified = False
            return False, r
        if reach > b:
            cover.verified = True
            return True, None
        r = reach
    cover.verified = False
    return False, r


def length_inequality(cover: OpenCover) -> bool:
    """Total piece length strictly exceeds the covered length."""
    if cover.verified is not True:
        raise CoverError("cover must be verified before using length_inequality")
    return sum(p.length for p in cover.pieces) > cover.target.length


def finite_subcover(cover: OpenCover) -> List[int]:
    """Greedy left-to-right subcover; minimal cardinality for interval covers."""
    if cover.verified is not True:
        raise CoverError("cover must be verified before extracting a subcover")
    a, b = cover.target.lo, cover.target.hi
    chosen: List[int] = []
    r = a
    for _ in range(len(cover.pieces) + 1):
        best_i, best_hi = -1, -math.inf
        for i, p in enumerate(cover.pieces):
            if p.lo < r < p.hi and p.hi > best_hi:
                best_i, best_hi = i, p.hi
        if best_i < 0:
            raise CoverError(f"sweep stalled at {r}; endpoint pathology in a verified cover")
        chosen.append(best_i)
        if best_hi > b:
            return chosen
        r = best_hi
    raise CoverError("sweep failed to terminate")


def lebesgue_number(cover: OpenCover, mode: str = "exact", sample: int = 256) -> float:
    """A delta such that any two target points within delta share a piece.

    exact mode returns the maximal such delta from the overlap sweep;
    paper mode returns the conservative min-half-radius value over a
    sample of points, each assigned its deepest containing piece.  When
    no pair of target points fails, the target length is returned.
    """
    if cover.verified is not True:
        raise CoverError("cover must be verified before computing a Lebesgue number")
    a, b = cover.target.lo, cover.target.hi
    if a == b:
        raise PreconditionError("target must be nondegenerate")
    if mode == "exact":
        return _lebesgue_exact(cover)
    if mode == "paper":
        return _lebesgue_half_radius(cover, sample)
    raise PreconditionError(f"unknown mode {mode!r}")


def _lebesgue_exact(cover: OpenCover) -> float:
    a, b = cover.target.lo, cover.target.hi
    pts = {a, b}
    for p in cover.pieces:
        for v in (p.lo, p.hi):
            if a <= v <= b:
                pts.add(v)
    breaks = sorted(pts)
    best = math.inf
    for x in breaks:
        reach = _reach(cover, x)
        if reach == -math.inf:
            raise CoverError(f"point {x} of a verified cover is uncovered")
        if reach <= b:
            best = min(best, reach - x)
    for p, q in zip(breaks, breaks[1:]):
        covering = [piece.hi for piece in cover.pieces if piece.lo <= p and piece.hi >= q]
        if not covering:
            raise CoverError(f"cell ({p}, {q}) of a verified cover is uncovered")
        reach = max(covering)
        if reach <= b:
            best = min(best, reach - q)
    return cover.target.length if best == math.inf else best


def binding_pair(cover: OpenCover, delta: float) -> Optional[Tuple[float, float]]:
    """A target pair within delta sharing no piece, or None.

    Directed search at the binding overlap: checks each breakpoint both
    exactly and from just inside the cell to its left.
    """
    a, b = cover.target.lo, cover.target.hi
    pts = {a, b}
    for p in cover.pieces:
        for v in (p.lo, p.hi):
            if a <= v <= b:
                pts.add(v)
    breaks = sorted(pts)
    candidates = list(breaks)
    for p, q in zip(breaks, breaks[1:]):
        eps = min(delta * 1e-3, (q - p) / 2)
        candidates.append(q - eps)
    for x in candidates:
        reach = _reach(cover, x)
        if reach == -math.inf:
            continue
        y = min(reach, b)
        for cand in (y, x + delta * (1 - 1e-12)):
            if cand > b or cand - x >= delta or cand < x:
                continue
            if not any(p.lo < x < p.hi and p.lo < cand < p.hi for p in cover.pieces):
                return (x, cand)
    return None


def _lebesgue_half_radius(cover: OpenCover, sample: int, max_sample: int = 1 << 20) -> float:
    a, b = cover.target.lo, cover.target.hi
    n = max(2, sample)
    while True:
        ts = np.linspace(a, b, n)
        radii = np.empty(n)
        for i, t in enumerate(ts):
            best = 0.0
            for p in cover.pieces:
                if p.lo < t < p.hi:
                    best = max(best, min(t - p.lo, p.hi - t))
            if best == 0.0:
                raise CoverError(f"sample point {t} of a verified cover is uncovered")
            radii[i] = best
        spacing = (b - a) / (n - 1)
        # every target point must sit within half a radius of some sample
        if spacing < float(radii.min()):
            return float(radii.min()) / 2
        if n >= max_sample:
            raise CoverError("sampling limit reached before half-radius coverage held")
        n *= 2


def validate_lebesgue(cover: OpenCover, delta: float, pairs: int = 10**4,
                      seed: int = 0) -> int:
    """Count violations of the defining property over random pairs."""
    rng = np.random.default_rng(seed)
    a, b = cover.target.lo, cover.target.hi
    xs = rng.uniform(a, b, pairs)
    offs = rng.uniform(-delta, delta, pairs)
    cs = np.clip(xs + offs * (1 - 1e-12), a, b)
    los = np.array([p.lo for p in cover.pieces])
    his = np.array([p.hi for p in cover.pieces])
    in_x = (los[None, :] < xs[:, None]) & (xs[:, None] < his[None, :])
    in_c = (los[None, :] < cs[:, None]) & (cs[:, None] < his[None, :])
    shared = (in_x & in_c).any(axis=1)
    close = np.abs(xs - cs) < delta
    return int(np.sum(close & ~shared))


def _window_radius(f: Expr, t: float, a: float, b: float, half_eps: float,
                   w0: float, probe: int = 33) -> float:
    """Largest sampled radius w with sup |f - f(t)| < half_eps on
    (t - w, t + w) clipped to [a, b], found by doubling then bisection."""
    ft = evaluate(f, t)
    cap = b - a

    def ok(w: float) -> bool:
        pts = np.clip(np.linspace(t - w, t + w, probe), a, b)
        return bool(np.max(np.abs(evaluate(f, pts) - ft)) < half_eps)

    w = w0
    while not ok(w):
        w /= 2
        if w < 1e-14:
            raise MathError(f"window collapsed near {t}: discontinuity at probe scale")
    if ok(cap):
        return cap
    lo = w
    while ok(lo * 2) and lo * 2 < cap:
        lo *= 2
    hi = min(lo * 2, cap)
    for _ in range(20):
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo * 0.95


def uniform_modulus(f: Expr, a: float, b: float, eps: float, grid: int = 256,
                    seed: int = 0) -> float:
    """Uniform-continuity modulus via a window cover and its exact
    Lebesgue number.

    Windows use eps/2 so that two points sharing a window differ by
    less than eps.  The returned delta is re-validated on 10^4 random
    pairs; persistent failures (under-sampled windows) raise.
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if grid < 16:
        raise PreconditionError("grid must be at least 16")
    if not a < b:
        raise PreconditionError("need a < b")
    ts = np.linspace(a, b, grid)
    w0 = (b - a) / grid
    radii = [_window_radius(f, float(t), a, b, eps / 2, w0) for t in ts]
    for attempt in range(4):
        pieces = [OpenInterval(float(t) - r, float(t) + r) for t, r in zip(ts, radii)]
        cover = OpenCover(Interval(a, b), pieces)
        ok, witness = verify_cover(cover)
        if not ok:
            raise CoverError(
                f"window cover misses {witness}; raise the grid for this function"
            )
        delta = lebesgue_number(cover, "exact")
        bad = 0
        rng = np.random.default_rng(seed)
        xs = rng.uniform(a, b, 10**4)
        cs = np.clip(xs + rng.uniform(-delta, delta, 10**4) * (1 - 1e-12), a, b)
        fx = evaluate(f, xs)
        fc = evaluate(f, cs)
        bad = int(np.sum((np.abs(xs - cs) < delta) & (np.abs(fx - fc) >= eps)))
        if bad == 0:
            return delta
        radii = [r * 0.7 for r in radii]
    raise MathError("modulus validation kept failing; windows under-sampled")


def step_approximation(f: Expr, a: float, b: float, eps: float,
                       delta: float = None, grid: int = 256, seed: int = 0) -> StepFunction:
    """Step function within eps of f, built on a uniform partition finer
    than the uniform-continuity modulus.

    Each cell carries the value of f at its left node.  Passing delta
    skips the modulus computation (useful when a modulus is known).
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if not a < b:
        raise PreconditionError("need a < b")
    if delta is None:
        delta = uniform_modulus(f, a, b, eps, grid=grid, seed=seed)
    if delta >= b - a:
        n = 1
    else:
        n = int(math.floor((b - a) / delta)) + 1
    part = uniform_partition(a, b, n)
    lefts = np.asarray(part.nodes[:-1])
    values = evaluate(f, lefts)
    return StepFunction(part, tuple(float(v) for v in values))


def sup_error(f: Expr, phi: StepFunction, factor: int = 10) -> float:
    """Measured sup |f - phi| over a factor-times-finer grid (nodes included)."""
    nodes = np.asarray(phi.partition.nodes)
    fine = [nodes]
    for lo, hi in phi.partition.cells():
        fine.append(np.linspace(lo, hi, factor + 1))
    xs = np.unique(np.concatenate(fine))
    return float(np.max(np.abs(evaluate(f, xs) - phi.sample(xs))))

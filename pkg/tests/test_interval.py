import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcalc.errors import IterationCapError, NestingError, PreconditionError
from fcalc.interval import (
    Interval,
    NestedSequence,
    Partition,
    bisect,
    refine,
    shrink_to_point,
    uniform_partition,
)
from helpers import random_partition

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_bisect_examples():
    left, right = bisect(Interval(0, 1))
    assert (left.lo, left.hi, right.lo, right.hi) == (0.0, 0.5, 0.5, 1.0)
    left, right = bisect(Interval(2, 2))
    assert left == right == Interval(2, 2)


def test_k_fold_bisection_halves_length():
    box = Interval(0.0, 1.0)
    for k in range(1, 40):
        box, _ = bisect(box)
        assert box.length == 1.0 / 2**k


@settings(max_examples=100, deadline=None)
@given(finite, finite)
def test_bisect_lengths_sum_within_ulp(a, b):
    a, b = sorted((a, b))
    i = Interval(a, b)
    left, right = bisect(i)
    total = left.length + right.length
    assert abs(total - i.length) <= math.ulp(max(1.0, abs(i.length)))
    assert left.hi == right.lo
    assert i.contains(left.hi)


def test_uniform_partition_examples():
    assert uniform_partition(0, 1, 4).nodes == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert uniform_partition(0, 1, 1).nodes == (0.0, 1.0)
    # smallest n with (b-a)/n < delta for delta = 0.3 on [0, 1]
    delta = 0.3
    n = 1
    while 1.0 / n >= delta:
        n += 1
    assert n == 4
    assert all(w < delta for w in uniform_partition(0, 1, n).widths())


def test_uniform_partition_endpoints_exact():
    p = uniform_partition(0.1, 0.3, 7)
    assert p.nodes[0] == 0.1 and p.nodes[-1] == 0.3
    widths = p.widths()
    target = (0.3 - 0.1) / 7
    # direct-formula nodes keep each width within one ulp at endpoint scale
    assert np.all(np.abs(widths - target) <= math.ulp(0.3))


def test_uniform_partition_rejects_zero_cells():
    with pytest.raises(PreconditionError):
        uniform_partition(0, 1, 0)


def test_degenerate_partition():
    assert uniform_partition(2, 2, 1).nodes == (2.0,)
    assert Partition((2.0,)).cell_count == 0


def test_refine_examples():
    p = Partition((0, 0.5, 1))
    q = Partition((0, 0.25, 1))
    assert refine(p, q).nodes == (0.0, 0.25, 0.5, 1.0)
    assert refine(p, p) == p
    with pytest.raises(PreconditionError):
        refine(p, Partition((0, 0.5, 2)))


def test_refine_commutative_on_random_pairs():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = Partition(random_partition(rng))
        q = Partition(random_partition(rng))
        assert refine(p, q) == refine(q, p)
        assert set(p.nodes) <= set(refine(p, q).nodes)


def test_partition_covers_interval():
    rng = np.random.default_rng(9)
    p = Partition(random_partition(rng))
    cells = p.cells()
    for x in np.linspace(p.a, p.b, 257):
        assert any(lo <= x <= hi for lo, hi in cells)


def test_shrink_to_point_examples():
    geometric = NestedSequence(lambda k: Interval(0.0, 2.0 ** (1 - k)))
    assert abs(shrink_to_point(geometric, 1e-9)) <= 1e-9
    # lengths 2/k reach 1e-6 only past index 2e6, so raise the cap
    symmetric = NestedSequence(lambda k: Interval(1 - 1 / k, 1 + 1 / k))
    assert abs(shrink_to_point(symmetric, 1e-6, max_iter=3 * 10**6) - 1.0) <= 1e-6


def test_shrink_to_point_fat_intersection_hits_cap():
    constant = NestedSequence(lambda k: Interval(3.0, 5.0))
    with pytest.raises(IterationCapError):
        shrink_to_point(constant, 1e-9, max_iter=10_000)


def test_shrink_to_point_detects_nesting_violation():
    def rule(k):
        return Interval(0.0, 1.0) if k == 1 else Interval(0.5, 2.0)

    with pytest.raises(NestingError):
        shrink_to_point(NestedSequence(rule), 1e-9)


def test_interval_validation():
    with pytest.raises(PreconditionError):
        Interval(2, 1)
    with pytest.raises(PreconditionError):
        Partition((0.0, 0.0, 1.0))

import math

import numpy as np
import pytest

from fcalc.errors import BracketError, NonCutError, PreconditionError
from fcalc.expr import evaluate, parse, to_text
from fcalc.suprema import (
    Cut,
    PredicateSet,
    affine_map,
    bisect_supremum,
    cut_point,
    ivt_root,
    ivt_root_result,
    sup_witnesses,
    supremum,
)


def test_supremum_sqrt2():
    pset = PredicateSet(lambda x: x * x < 2, 0.0, 2.0)
    value = supremum(pset, 1e-9)
    assert abs(value - math.sqrt(2)) <= 1e-9


def test_supremum_element_is_sup_shortcut():
    pset = PredicateSet(lambda x: x <= 1, 0.0, 1.0)
    res = bisect_supremum(pset, 1e-9)
    assert res.value == 1.0 and res.iterations == 0


def test_supremum_singleton():
    pset = PredicateSet(lambda x: x == 0.0, 0.0, 5.0)
    assert abs(supremum(pset, 1e-6)) <= 1e-6


def test_supremum_bracketing_property():
    pset = PredicateSet(lambda x: x * x < 2, 0.0, 2.0)
    tol = 1e-6
    r = supremum(pset, tol)
    rng = np.random.default_rng(1)
    probes = rng.uniform(0.0, 2.0, 1000)
    assert any(pset.member(t) for t in np.append(probes, r) if r - tol <= t <= r)
    assert not any(pset.member(t) for t in probes if t > r + tol)


def test_sup_witnesses_examples():
    pset = PredicateSet(lambda x: x * x < 2, 0.0, 2.0)
    sup_value = supremum(pset, 1e-9)
    wit = sup_witnesses(pset, sup_value, 10)
    for n, c in enumerate(wit, start=1):
        assert pset.member(c)
        assert abs(c - sup_value) < 1.0 / n
    singleton = PredicateSet(lambda x: x == 0.0, 0.0, 5.0)
    assert sup_witnesses(singleton, supremum(singleton, 1e-8), 3) == [0.0, 0.0, 0.0]
    box = PredicateSet(lambda x: x <= 1, 0.0, 1.0)
    wit = sup_witnesses(box, 1.0, 5)
    assert all(1 - 1.0 / n < c <= 1.0 for n, c in enumerate(wit, start=1))


def test_supremum_preconditions():
    with pytest.raises(PreconditionError):
        supremum(PredicateSet(lambda x: x < 1, 0.0, 2.0), -1.0)
    with pytest.raises(PreconditionError):
        supremum(PredicateSet(lambda x: False, 0.0, 2.0), 1e-9)
    with pytest.raises(PreconditionError):
        supremum(PredicateSet(lambda x: True, 3.0, 2.0), 1e-9)


def test_cut_point_examples():
    assert abs(cut_point(Cut(lambda x: x**3 < 2, 0.0, 2.0), 1e-9) - 2 ** (1 / 3)) <= 1e-9
    assert abs(cut_point(Cut(lambda x: x < 0, -1.0, 1.0), 1e-9)) <= 1e-9


def test_cut_point_detects_non_monotone_predicate():
    # sin > 0 holds again on (2pi, 3pi), so the probe grid sees a hit
    # above a miss: not downward closed
    with pytest.raises(NonCutError):
        cut_point(Cut(lambda x: math.sin(x) > 0, 1.0, 11.0), 1e-6, probes=64)
    # samples ordered against downward closure are rejected outright
    with pytest.raises(NonCutError):
        cut_point(Cut(lambda x: math.sin(x) > 0, 7.0, -1.0), 1e-6)


def test_cut_point_random_rationals():
    rng = np.random.default_rng(11)
    tol = 1e-9
    for _ in range(100):
        q = float(rng.integers(-50, 50)) / float(rng.integers(1, 50))
        got = cut_point(Cut(lambda x, q=q: x < q, q - 2.0, q + 2.0), tol)
        assert abs(got - q) <= tol


def test_ivt_root_examples():
    f = parse("x^3 - x - 2")
    res = ivt_root_result(f, 1.0, 2.0, 0.0, 1e-10)
    assert abs(evaluate(f, res.root)) <= 1e-8
    assert res.bracket[1] - res.bracket[0] <= 1e-10
    assert 1.0 <= res.root <= 2.0
    assert abs(ivt_root(parse("x"), -1.0, 1.0, 0.0, 1e-9)) <= 1e-9
    with pytest.raises(BracketError):
        ivt_root(parse("x^2"), 1.0, 2.0, 0.0)


def test_ivt_root_iteration_count_matches_halving():
    f = parse("x^3 - x - 2")
    tol = 1e-6
    res = ivt_root_result(f, 1.0, 2.0, 0.0, tol)
    assert res.iterations == math.ceil(math.log2(1.0 / tol))


def test_ivt_root_exact_hit_terminates():
    res = ivt_root_result(parse("x"), -1.0, 1.0, 0.0, 1e-12)
    assert res.root == 0.0 and res.residual == 0.0


def test_affine_map_examples():
    identity = affine_map(0, 1, 0, 1)
    for t in (0.0, 0.5, 1.0):
        assert evaluate(identity, t) == t
    stretch = affine_map(0, 1, 3, 5)
    assert evaluate(stretch, 0.5) == 4.0
    shift = affine_map(-1, 1, 0, 1)
    assert evaluate(shift, -1.0) == 0.0 and evaluate(shift, 1.0) == 1.0
    with pytest.raises(PreconditionError):
        affine_map(1, 1, 0, 1)


def test_affine_map_composes_to_identity():
    rng = np.random.default_rng(7)
    fwd = affine_map(-2, 3, 10, 11)
    back = affine_map(10, 11, -2, 3)
    for t in rng.uniform(-2, 3, 100):
        assert abs(evaluate(back, evaluate(fwd, t)) - t) <= 1e-12
    # the expression is grammar-conformant text too
    assert evaluate(parse(to_text(fwd)), 0.5) == evaluate(fwd, 0.5)

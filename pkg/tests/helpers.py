"""Shared generators for the numerical property tests."""

import numpy as np

from fcalc import expr as E


def random_polynomial(rng, max_degree=5, scale=1.0, decay=1.0):
    """Random polynomial tree with coefficients scale * decay^k * U(-1, 1)."""
    degree = int(rng.integers(1, max_degree + 1))
    coeffs = [scale * decay**k * rng.uniform(-1.0, 1.0) for k in range(degree + 1)]
    tree = E.const(coeffs[0])
    for k in range(1, degree + 1):
        tree = E.add(tree, E.mul(E.const(coeffs[k]), E.pow_(E.Var(), k)))
    return tree


def random_smooth_expr(rng, trig=True):
    """Polynomial plus optional trig/exp parts; smooth on all of R."""
    tree = random_polynomial(rng, max_degree=3)
    if trig and rng.uniform() < 0.6:
        name = ("sin", "cos", "exp")[int(rng.integers(0, 3))]
        inner = E.add(E.mul(E.const(rng.uniform(-1.5, 1.5)), E.Var()),
                      E.const(rng.uniform(-1.0, 1.0)))
        tree = E.add(tree, E.mul(E.const(rng.uniform(-1.0, 1.0)), E.func(name, inner)))
    return tree


def random_partition(rng, a=0.0, b=1.0, max_interior=8):
    """Random strictly increasing node tuple from a to b."""
    k = int(rng.integers(0, max_interior + 1))
    interior = np.sort(rng.uniform(a, b, k))
    nodes = [a]
    for v in interior:
        if v > nodes[-1] + 1e-9 and v < b - 1e-9:
            nodes.append(float(v))
    nodes.append(b)
    return tuple(nodes)

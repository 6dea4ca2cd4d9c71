"""Constructive real-analysis toolkit.

Bisection constructions, step-function integration, mean-value and
Taylor witness finders, interval covers with Lebesgue numbers, and the
implication graph of completeness-equivalent principles, all exposed as
a library and through the `fc` command line.
"""

from . import calculus, cover, errors, expr, graph, integrate, interval, sequences, stepfn, suprema

__version__ = "0.1.0"

__all__ = [
    "calculus",
    "cover",
    "errors",
    "expr",
    "graph",
    "integrate",
    "interval",
    "sequences",
    "stepfn",
    "suprema",
    "__version__",
]

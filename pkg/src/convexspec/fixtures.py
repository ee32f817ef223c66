"""Small maps with known spectral data, used by the tests and the demos.

Coordinates are 0-based here; the docstrings use the familiar 1-based names.
"""
from __future__ import annotations

from fractions import Fraction as Q

from . import scalars as sc
from .model import LogSumExp, MapModel, MaxAffine, Generator, max_affine

# generator sets of the three rows of the rectangular set used throughout
F1_SUBDIFF_ROWS = (
    ((Q(1), Q(0), Q(0)), (Q(1, 2), Q(1, 2), Q(0)), (Q(1, 2), Q(0), Q(1, 2))),
    ((Q(0), Q(1), Q(0)), (Q(2, 3), Q(1, 3), Q(0))),
    ((Q(0), Q(0), Q(1)),),
)


def f1() -> MapModel:
    """x1 v (x1+x2)/2 v (-3+x3) v (x1+x3)/2,  x2 v (2x1+x2)/3 v (-1+x1),  x3 v (-2+x1).

    f(0) = 0, critical classes {1,2} and {3}, eigenspace {x1 = x2 >= x3 >= x1 - 2}.
    """
    return max_affine([
        [((1, 0, 0), 0), ((Q(1, 2), Q(1, 2), 0), 0), ((0, 0, 1), -3), ((Q(1, 2), 0, Q(1, 2)), 0)],
        [((0, 1, 0), 0), ((Q(2, 3), Q(1, 3), 0), 0), ((1, 0, 0), -1)],
        [((0, 0, 1), 0), ((1, 0, 0), -2)],
    ])


def f2() -> MapModel:
    """(x1+x2)/2,  log(e^x2 + 8 e^x3),  x1 v (-1+x3)  (float mode).

    Eigenvalue log 2 with eigenvector (log 2, 3 log 2, 0), unique up to a constant.
    """
    return MapModel((
        MaxAffine((Generator((0.5, 0.5, 0.0), 0.0),)),
        LogSumExp((0.0, 1.0, 8.0)),
        MaxAffine((Generator((1.0, 0.0, 0.0), 0.0), Generator((0.0, 0.0, 1.0), -1.0))),
    ), sc.FLOAT)


def f3() -> MapModel:
    """x2 v x3,  x2,  x3: two critical classes {2}, {3}; eigenspace not convex."""
    return max_affine([
        [((0, 1, 0), 0), ((0, 0, 1), 0)],
        [((0, 1, 0), 0)],
        [((0, 0, 1), 0)],
    ])


def f4(a=(1, 1, 1)) -> MapModel:
    """x2 v (-a1 + (x1+x3)/2),  x1 v (-a2 + (x2+x3)/2),  x3 v (-a3 + (x1+x2)/2).

    Cyclicity 2: critical classes {1,2} (a 2-cycle) and {3}.
    """
    h = Q(1, 2)
    a1, a2, a3 = (sc.to_exact(v) for v in a)
    return max_affine([
        [((0, 1, 0), 0), ((h, 0, h), -a1)],
        [((1, 0, 0), 0), ((0, h, h), -a2)],
        [((0, 0, 1), 0), ((h, h, 0), -a3)],
    ])


def ex_f4() -> MapModel:
    """x2,  x2 v x3,  x3: classes {2} and {3}, only {3} invariant."""
    return max_affine([
        [((0, 1, 0), 0)],
        [((0, 1, 0), 0), ((0, 0, 1), 0)],
        [((0, 0, 1), 0)],
    ])


def moreau_k() -> MapModel:
    """(x1 v x2, x1 v x2): one critical class {1,2}, one-dimensional eigenspace."""
    return max_affine([
        [((1, 0), 0), ((0, 1), 0)],
        [((1, 0), 0), ((0, 1), 0)],
    ])

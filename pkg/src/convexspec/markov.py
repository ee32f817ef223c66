"""Stochastic and substochastic matrices: classes, final graphs, invariant measures.

Matrices are sequences of rows. Rows of Fractions are handled exactly, rows of
floats with a 1e-12 slack on row sums and a residual check on linear solves.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import scalars as sc
from .graphs import DiGraph, strong_components

FLOAT_RESIDUAL = 1e-10


def matrix_mode(P: Sequence[Sequence]) -> str:
    for row in P:
        for a in row:
            if isinstance(a, float):
                return sc.FLOAT
    return sc.EXACT


def as_matrix(P: Sequence[Sequence], mode: str = None) -> tuple:
    mode = mode or matrix_mode(P)
    return tuple(sc.vector(row, mode) for row in P)


def matrix_graph(P: Sequence[Sequence]) -> DiGraph:
    n = len(P)
    arcs = {(i, j) for i in range(n) for j in range(n) if P[i][j] != 0}
    return DiGraph(frozenset(range(n)), frozenset(arcs))


def is_stochastic(P: Sequence[Sequence]) -> bool:
    mode = matrix_mode(P)
    return all(min(row) >= 0 and sc.is_one(sum(row), mode) for row in P)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    cols = list(zip(*B))
    return tuple(tuple(sc.dot(row, col) for col in cols) for row in A)


def matrix_power(P: Sequence[Sequence], k: int) -> tuple:
    if k < 1:
        raise ValueError("matrix_power needs k >= 1")
    out = as_matrix(P)
    for _ in range(k - 1):
        out = matmul(out, P)
    return out


def final_classes_of_matrix(P: Sequence[Sequence]) -> list:
    """Classes with no outgoing arc whose diagonal block is stochastic."""
    mode = matrix_mode(P)
    g = matrix_graph(P)
    out = []
    for cls in strong_components(g):
        if any(P[i][j] != 0 for i in cls for j in range(len(P)) if j not in cls):
            continue
        if all(sc.is_one(sum(P[i][j] for j in cls), mode) for i in cls):
            out.append(cls)
    return out


def final_graph(P: Sequence[Sequence]) -> DiGraph:
    """Union of the graphs of the diagonal blocks of P over its final classes."""
    nodes = set()
    arcs = set()
    for cls in final_classes_of_matrix(P):
        nodes.update(cls)
        arcs.update((i, j) for i in cls for j in cls if P[i][j] != 0)
    return DiGraph(frozenset(nodes), frozenset(arcs))


def solve(A: Sequence[Sequence], b: Sequence) -> tuple:
    """Solve the square system ``A x = b``.

    Exact input: Gauss-Jordan elimination over Fractions. Float input: numpy's
    partial-pivot LU, rejected if the residual exceeds 1e-10.
    """
    n = len(A)
    if matrix_mode(A) == sc.FLOAT or any(isinstance(v, float) for v in b):
        a = np.array(A, dtype=float)
        rhs = np.array(b, dtype=float)
        x = np.linalg.solve(a, rhs)
        if n and np.max(np.abs(a @ x - rhs)) > FLOAT_RESIDUAL:
            raise np.linalg.LinAlgError("residual check failed")
        return tuple(float(v) for v in x)
    M = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                fac = M[r][col]
                M[r] = [a - fac * c for a, c in zip(M[r], M[col])]
    return tuple(M[r][n] for r in range(n))


def invariant_measure(P: Sequence[Sequence], F: Iterable[int]) -> dict:
    """Stationary distribution of the block ``P_FF`` of a final class F.

    Returned as ``{node: weight}``; all weights are positive and sum to 1.
    """
    F = sorted(F)
    if frozenset(F) not in set(final_classes_of_matrix(P)):
        raise ValueError(f"{F} is not a final class of the matrix")
    mode = matrix_mode(P)
    k = len(F)
    # m (P_FF - I) = 0 with the last equation replaced by sum(m) = 1
    A = [[P[F[j]][F[i]] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    A[-1] = [sc.one(mode)] * k
    b = [sc.zero(mode)] * (k - 1) + [sc.one(mode)]
    m = solve(A, b)
    return dict(zip(F, m))


def mean_reward(P: Sequence[Sequence], r: Sequence) -> tuple:
    """Cesàro-average reward of the chain started in each state.

    Constant ``m_F . r_F`` on each final class F; on transient states the
    harmonic extension ``(I - Q) h = R c`` of those class values.
    """
    n = len(P)
    if not is_stochastic(P):
        raise ValueError("mean_reward needs a stochastic matrix")
    mode = matrix_mode(P)
    r = sc.vector(r, mode)
    mu = [None] * n
    for cls in final_classes_of_matrix(P):
        m = invariant_measure(P, cls)
        value = sum((m[i] * r[i] for i in cls), sc.zero(mode))
        for i in cls:
            mu[i] = value
    T = [i for i in range(n) if mu[i] is None]
    if T:
        A = [[(1 if a == b else 0) - P[a][b] for b in T] for a in T]
        rhs = [sum((P[a][j] * mu[j] for j in range(n) if mu[j] is not None), sc.zero(mode)) for a in T]
        for a, h in zip(T, solve(A, rhs)):
            mu[a] = h
    return tuple(mu)

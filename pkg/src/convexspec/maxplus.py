"""Max-plus matrices: cycle means, Kleene star, eigenvectors, saturation graph.

``f_A(x)_i = max_j (A_ij + x_j)``. Missing entries are ``-inf`` (a float in
both arithmetic modes).
"""
from __future__ import annotations

import json
from typing import Sequence

from . import scalars as sc
from .graphs import DiGraph, nontrivial_components, strong_components
from .model import Generator, MapModel, MaxAffine

NEG_INF = float("-inf")


class MaxPlusError(ValueError):
    pass


def _entry(value, mode):
    if value == "-inf" or value == NEG_INF:
        return NEG_INF
    return sc.convert(value, mode)


def maxplus_from_dict(doc: dict) -> tuple:
    """``(A, mode)`` from ``{"entries": [[scalar | "-inf", ...], ...]}``."""
    rows = doc.get("entries") if isinstance(doc, dict) else None
    if not rows:
        raise MaxPlusError("max-plus document needs a nonempty 'entries' matrix")
    mode = doc.get("mode")
    if mode is None:
        finite = [v for row in rows for v in row if v != "-inf"]
        mode = sc.FLOAT if any(isinstance(v, float) and not v.is_integer() for v in finite) else sc.EXACT
    A = as_maxplus(rows, mode)
    return A, mode


def load_maxplus(path) -> tuple:
    with open(path) as fh:
        return maxplus_from_dict(json.load(fh))


def as_maxplus(rows: Sequence[Sequence], mode: str = sc.EXACT) -> tuple:
    n = len(rows)
    A = tuple(tuple(_entry(v, mode) for v in row) for row in rows)
    for i, row in enumerate(A):
        if len(row) != n:
            raise MaxPlusError(f"row {i} has length {len(row)}, expected {n}")
        if all(v == NEG_INF for v in row):
            raise MaxPlusError(f"row {i} has no finite entry")
    return A


def maxplus_graph(A) -> DiGraph:
    n = len(A)
    return DiGraph.from_arcs(((i, j) for i in range(n) for j in range(n) if A[i][j] != NEG_INF), range(n))


def maxplus_apply(A, x) -> tuple:
    return tuple(max(a + xj for a, xj in zip(row, x) if a != NEG_INF) for row in A)


def maxplus_to_model(A, mode: str = sc.EXACT) -> MapModel:
    """The max-affine map ``x -> A (x) x`` with Dirac generators."""
    n = len(A)
    coords = []
    for row in A:
        gens = tuple(Generator(tuple(sc.convert(int(k == j), mode) for k in range(n)), a)
                     for j, a in enumerate(row) if a != NEG_INF)
        coords.append(MaxAffine(gens))
    return MapModel(tuple(coords), mode)


def maxplus_rho(A):
    """Maximal circuit mean by Karp's formula.

    Starting every node at 0 handles reducible matrices: the maximum is taken
    over nodes v with ``D_n(v)`` finite of ``min_k (D_n(v) - D_k(v)) / (n - k)``.
    """
    n = len(A)
    D = [[0] * n]
    for _ in range(n):
        prev = D[-1]
        D.append([max((prev[u] + A[u][v] for u in range(n) if A[u][v] != NEG_INF and prev[u] != NEG_INF),
                      default=NEG_INF) for v in range(n)])
    best = NEG_INF
    for v in range(n):
        if D[n][v] == NEG_INF:
            continue
        worst = min((D[n][v] - D[k][v]) / (n - k) for k in range(n) if D[k][v] != NEG_INF)
        best = max(best, worst)
    return best


def plus_closure(A) -> list:
    """``A+ = A (+) A^2 (+) ...`` by Floyd-Warshall relaxation; needs rho(A) <= 0."""
    n = len(A)
    S = [list(row) for row in A]
    for k in range(n):
        for i in range(n):
            sik = S[i][k]
            if sik == NEG_INF:
                continue
            for j in range(n):
                if S[k][j] != NEG_INF and sik + S[k][j] > S[i][j]:
                    S[i][j] = sik + S[k][j]
    return S


def kleene_star(A) -> list:
    S = plus_closure(A)
    zero = next(a for row in A for a in row if a != NEG_INF) * 0
    for i in range(len(A)):
        S[i][i] = max(S[i][i], zero)
    return S


def maxplus_eigen(A, tol=None) -> tuple:
    """``(rho, v)`` for irreducible A; v is a critical column of the star of ``A - rho``."""
    n = len(A)
    if len(strong_components(maxplus_graph(A))) != 1:
        raise MaxPlusError("maxplus_eigen needs an irreducible matrix")
    rho = maxplus_rho(A)
    exact = not isinstance(rho, float)
    tol = 0 if exact else (sc.DEFAULT_FLOAT_TOL if tol is None else tol)
    B = [[a - rho if a != NEG_INF else NEG_INF for a in row] for row in A]
    S = plus_closure(B)
    diag = [S[i][i] for i in range(n)]
    if max(diag) > tol:
        raise AssertionError("positive circuit after normalization")
    c = next(i for i in range(n) if abs(diag[i]) <= tol)
    v = tuple(S[i][c] - S[c][c] for i in range(n))
    return rho, v


def _check_pair(A, lam, v, tol):
    res = max(abs(a - lam - b) for a, b in zip(maxplus_apply(A, v), v))
    if res > tol:
        raise MaxPlusError(f"not a max-plus eigenpair: residual {res}")


def saturation_graph(A, lam, v, tol=None) -> DiGraph:
    """Arcs ``i -> j`` with ``lam + v_i = A_ij + v_j``."""
    exact = not any(isinstance(x, float) for x in (lam, *v))
    tol = 0 if exact else (sc.DEFAULT_FLOAT_TOL if tol is None else tol)
    _check_pair(A, lam, v, tol)
    n = len(A)
    arcs = [(i, j) for i in range(n) for j in range(n)
            if A[i][j] != NEG_INF and abs(lam + v[i] - A[i][j] - v[j]) <= tol]
    return DiGraph.from_arcs(arcs, range(n))


def maxplus_critical(A, lam, v, tol=None) -> DiGraph:
    """Arcs of the saturation graph lying in its nontrivial strong components."""
    sat = saturation_graph(A, lam, v, tol)
    nodes, arcs = set(), set()
    for cls in nontrivial_components(sat):
        nodes |= cls
        arcs |= {(i, j) for i, j in sat.arcs if i in cls and j in cls}
    return DiGraph(frozenset(nodes), frozenset(arcs))

"""Random instances and brute-force oracles shared by the test modules."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction as Q
from math import gcd
from pathlib import Path

from convexspec import scalars as sc
from convexspec.graphs import DiGraph
from convexspec.markov import final_classes_of_matrix
from convexspec.model import evaluate, max_affine

FIXTURES = Path(__file__).parent / "fixtures"
GRID = (Q(0), Q(1, 4), Q(1, 3), Q(1, 2), Q(2, 3), Q(1))
NEG_INF = float("-inf")


def random_stochastic_row(rng, n, max_support=None):
    k = rng.randint(1, max_support or n)
    support = rng.sample(range(n), min(k, n))
    w = [rng.choice(GRID[1:]) for _ in support]
    s = sum(w)
    row = [Q(0)] * n
    for j, a in zip(support, w):
        row[j] = a / s
    return tuple(row)


def random_stochastic_matrix(rng, n):
    """Rows drawn from the rational grid and normalized; zeros are common."""
    P = []
    for _ in range(n):
        w = [rng.choice(GRID) for _ in range(n)]
        if not any(w):
            w[rng.randrange(n)] = Q(1)
        s = sum(w)
        P.append(tuple(a / s for a in w))
    return tuple(P)


def random_model(rng, n=None, max_gens=3, max_support=2):
    """Pure max-affine exact model with f(0) = 0.

    Offsets are drawn from {-2, ..., 1} and shifted so the largest offset in
    each row is 0. Supports are kept small so powers stay enumerable.
    """
    n = n or rng.randint(1, 5)
    rows = []
    for _ in range(n):
        gens = {}
        for _ in range(rng.randint(1, max_gens)):
            gens[random_stochastic_row(rng, n, max_support)] = Q(rng.randint(-2, 1))
        top = max(gens.values())
        rows.append([(p, r - top) for p, r in gens.items()])
    m = max_affine(rows)
    assert evaluate(m, [0] * n) == (0,) * n
    return m


def random_irreducible_maxplus(rng, n):
    entries = [[NEG_INF] * n for _ in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    for a, b in zip(perm, perm[1:] + perm[:1]):
        entries[a][b] = Q(rng.randint(-3, 3))
    for i in range(n):
        for j in range(n):
            if entries[i][j] == NEG_INF and rng.random() < 0.4:
                entries[i][j] = Q(rng.randint(-3, 3), rng.choice((1, 2)))
    return tuple(tuple(r) for r in entries)


def simple_circuits(n, arcs):
    """All simple circuits as node lists (Johnson-free brute force for n <= 8)."""
    succ = {i: sorted(j for a, j in arcs if a == i) for i in range(n)}
    out = []

    def dfs(start, node, path, seen):
        for j in succ[node]:
            if j == start:
                out.append(list(path))
            elif j > start and j not in seen:
                seen.add(j)
                path.append(j)
                dfs(start, j, path, seen)
                path.pop()
                seen.discard(j)

    for s in range(n):
        dfs(s, s, [s], {s})
    return out


def brute_cycle_mean(A):
    n = len(A)
    arcs = [(i, j) for i in range(n) for j in range(n) if A[i][j] != NEG_INF]
    best = NEG_INF
    for c in simple_circuits(n, arcs):
        w = sum(A[a][b] for a, b in zip(c, c[1:] + c[:1]))
        best = max(best, Q(w) / len(c))
    return best


def brute_period(g: DiGraph) -> int:
    """gcd of simple circuit lengths of a strongly connected graph."""
    nodes = sorted(g.nodes)
    idx = {v: k for k, v in enumerate(nodes)}
    arcs = [(idx[i], idx[j]) for i, j in g.arcs]
    d = 0
    for c in simple_circuits(len(nodes), arcs):
        d = gcd(d, len(c))
    return d


def rect_final_graph_oracle(rows) -> DiGraph:
    """Final graph of co(rows_1 x ... x rows_n) from vertex products.

    Final classes of vertex matrices are merged while they overlap (the
    average of two matrices has the union as a final class); arcs of a
    maximal class come from every row supported in it with mass 1.
    """
    n = len(rows)
    classes = set()
    for P in itertools.product(*rows):
        classes.update(final_classes_of_matrix(P))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(classes), 2):
            if a & b and (a | b) not in classes:
                classes.add(a | b)
                changed = True
    maximal = [c for c in classes if not any(c < d for d in classes)]
    nodes, arcs = set(), set()
    for C in maximal:
        nodes |= C
        for i in C:
            for p in rows[i]:
                if all(p[j] == 0 for j in range(n) if j not in C) and sum(p[j] for j in C) == 1:
                    arcs |= {(i, j) for j in C if p[j] != 0}
    return DiGraph(frozenset(nodes), frozenset(arcs))


def random_point(rng, n, lo=-3, hi=3):
    return tuple(Q(rng.randint(lo * 4, hi * 4), 4) for _ in range(n))


def join_iterate(m, lam, z, tol=1e-13, max_iter=100000):
    """Increase z by z <- z v (f(z) - lam) until f(z) <= lam + z (float)."""
    for _ in range(max_iter):
        fz = evaluate(m, z)
        nz = tuple(max(a, b - lam) for a, b in zip(z, fz))
        if sc.sup_norm(nz, z) <= tol:
            return tuple(max(a, b - lam) for a, b in zip(nz, evaluate(m, nz)))
        z = nz
    raise RuntimeError("join iteration did not settle")

"""Critical graph, classes and cyclicity of a map at one of its eigenvectors."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import scalars as sc
from .graphs import DiGraph, component_period, cyclicity, final_classes, strong_components
from .markov import final_graph
from .model import MapModel, active_generators, subdiff_generators


class InvalidEigenpair(ValueError):
    pass


@dataclass(frozen=True)
class CriticalData:
    graph: DiGraph
    classes: tuple
    nodes: frozenset
    cyclicity: int

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_periods(self) -> tuple:
        return tuple(component_period(self.graph, c) for c in self.classes)


def _row_sum_is_one(p, idx, exact):
    s = sum(p[j] for j in idx)
    return s == 1 if exact else abs(s - 1) <= sc.FLOAT_EPS


def final_graph_of_rect(rows: Sequence[Sequence[Sequence]]) -> DiGraph:
    """Final graph of ``co(rows[0] x ... x rows[n-1])``.

    Each level keeps the rows of sum 1, builds the union graph G, peels off the
    final classes F of G (their arcs belong to the answer when they carry a
    circuit) and recurses on the complement with the rows that avoid F.
    """
    exact = not any(isinstance(a, float) for row in rows for p in row for a in p)
    active = list(range(len(rows)))
    current = {i: list(rows[i]) for i in active}
    nodes, arcs = set(), set()
    while active:
        stoch = {i: [p for p in current[i] if _row_sum_is_one(p, active, exact)] for i in active}
        g_arcs = {(i, j) for i in active for p in stoch[i] for j in active if p[j] != 0}
        g = DiGraph(frozenset(active), frozenset(g_arcs))
        finals = final_classes(g)
        if all(g.is_trivial_class(c) for c in strong_components(g)):
            break
        F = set()
        for cls in finals:
            F |= cls
            if not g.is_trivial_class(cls):
                nodes |= cls
                arcs |= {(i, j) for i, j in g_arcs if i in cls}
        active = [i for i in active if i not in F]
        current = {i: [p for p in stoch[i] if all(p[j] == 0 for j in F)] for i in active}
    return DiGraph(frozenset(nodes), frozenset(arcs))


def verify_pair(m: MapModel, lam, v, tol=None):
    from .spectral import verify_eigenpair

    ok, residual = verify_eigenpair(m, lam, v, tol)
    if not ok:
        raise InvalidEigenpair(f"not an eigenpair: residual {residual}")
    return residual


def critical_data_of_graph(g: DiGraph) -> CriticalData:
    classes = tuple(strong_components(g))
    return CriticalData(g, classes, frozenset(g.nodes), cyclicity(g))


def critical_data(m: MapModel, v, lam, tol=None) -> CriticalData:
    """Critical graph, classes, nodes and cyclicity, read off ``∂f(v)``."""
    verify_pair(m, lam, v, tol)
    rows = subdiff_generators(m, v, None if m.mode == sc.EXACT else tol)
    return critical_data_of_graph(final_graph_of_rect(rows))


def _support_within(p, cls):
    return all(a == 0 for j, a in enumerate(p) if j not in cls)


def witness_rows(m: MapModel, v, lam, tol=None):
    """Per row, the active generator indices averaged into the witness matrix."""
    verify_pair(m, lam, v, tol)
    gens = active_generators(m, v, None if m.mode == sc.EXACT else tol)
    rows = subdiff_generators(m, v, None if m.mode == sc.EXACT else tol)
    cd = critical_data_of_graph(final_graph_of_rect(rows))
    where = {i: cls for cls in cd.classes for i in cls}
    picks = []
    for i, row in enumerate(gens):
        if i in where:
            idx = [k for k, g in enumerate(row)
                   if _support_within(g.p, where[i]) and _row_sum_is_one(g.p, where[i], m.mode == sc.EXACT)]
        else:
            idx = [0]
        picks.append(idx)
    return gens, picks, cd


def witness_matrix(m: MapModel, v, lam, tol=None) -> tuple:
    """A matrix in ``∂f(v)`` whose final graph is the critical graph.

    Critical rows average (uniformly) the active generators supported in
    their class; other rows take the first active generator.
    """
    gens, picks, cd = witness_rows(m, v, lam, tol)
    P = []
    for row, idx in zip(gens, picks):
        k = len(idx)
        acc = [sc.zero(m.mode)] * m.n
        for t in idx:
            acc = [a + b for a, b in zip(acc, row[t].p)]
        scale = sc.convert(1, m.mode) / k
        P.append(tuple(a * scale for a in acc))
    P = tuple(P)
    if final_graph(P) != cd.graph:
        raise AssertionError("witness matrix does not reproduce the critical graph")
    return P


def invariant_critical_classes(m: MapModel, v, lam, tol=None) -> list:
    """Critical classes that no active generator row leaves."""
    verify_pair(m, lam, v, tol)
    rows = subdiff_generators(m, v, None if m.mode == sc.EXACT else tol)
    cd = critical_data_of_graph(final_graph_of_rect(rows))
    return [cls for cls in cd.classes
            if all(_support_within(p, cls) for i in cls for p in rows[i])]


def section(cd: CriticalData, nodes: Optional[Iterable[int]] = None) -> frozenset:
    """A node set meeting each critical class exactly once.

    Without `nodes`, the smallest node of each class; an explicit list is
    checked and returned.
    """
    if nodes is None:
        return frozenset(min(c) for c in cd.classes)
    S = frozenset(nodes)
    if not S <= cd.nodes:
        raise ValueError("section contains non-critical nodes")
    for c in cd.classes:
        if len(S & c) != 1:
            raise ValueError(f"section meets class {sorted(c)} {len(S & c)} times")
    return S

"""Directed graphs on subsets of ``{0, ..., n-1}``.

Nodes are 0-based integers. 1-based labels only appear in DOT output and the
command line front end.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class DiGraph:
    nodes: frozenset = frozenset()
    arcs: frozenset = frozenset()
    _succ: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "arcs", frozenset((int(i), int(j)) for i, j in self.arcs))
        for i, j in self.arcs:
            if i not in self.nodes or j not in self.nodes:
                raise ValueError(f"arc {i}->{j} references a node outside the graph")
        succ = {v: [] for v in self.nodes}
        for i, j in sorted(self.arcs):
            succ[i].append(j)
        object.__setattr__(self, "_succ", succ)

    @classmethod
    def from_arcs(cls, arcs: Iterable, nodes: Iterable = ()) -> "DiGraph":
        arcs = frozenset(arcs)
        nodes = set(nodes)
        for i, j in arcs:
            nodes.update((i, j))
        return cls(frozenset(nodes), arcs)

    def successors(self, v: int) -> list:
        return self._succ[v]

    def has_loop(self, v: int) -> bool:
        return (v, v) in self.arcs

    def subgraph(self, keep: Iterable) -> "DiGraph":
        keep = frozenset(keep) & self.nodes
        return DiGraph(keep, frozenset((i, j) for i, j in self.arcs if i in keep and j in keep))

    def union(self, other: "DiGraph") -> "DiGraph":
        return DiGraph(self.nodes | other.nodes, self.arcs | other.arcs)

    def is_trivial_class(self, cls: Iterable) -> bool:
        cls = list(cls)
        return len(cls) == 1 and not self.has_loop(cls[0])

    def __len__(self):
        return len(self.nodes)


def strong_components(g: DiGraph) -> list:
    """Classes of `g` as frozensets, sources of the condensation first.

    Ties in the topological order are broken by the smallest node so the
    output is reproducible.
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0

    for root in sorted(g.nodes):
        if root in index:
            continue
        # iterative low-link search; work items are (node, next-successor-position)
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, pos = work[-1]
            succ = g.successors(v)
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))

    return _topological(g, comps)


def _topological(g: DiGraph, comps: list) -> list:
    where = {v: k for k, comp in enumerate(comps) for v in comp}
    out_edges = [set() for _ in comps]
    indeg = [0] * len(comps)
    for i, j in g.arcs:
        a, b = where[i], where[j]
        if a != b and b not in out_edges[a]:
            out_edges[a].add(b)
            indeg[b] += 1
    heap = [(min(comps[k]), k) for k in range(len(comps)) if indeg[k] == 0]
    heapq.heapify(heap)
    ordered = []
    while heap:
        _, k = heapq.heappop(heap)
        ordered.append(comps[k])
        for b in out_edges[k]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (min(comps[b]), b))
    return ordered


def final_classes(g: DiGraph) -> list:
    """Classes with no arc leaving them."""
    out = []
    for cls in strong_components(g):
        if all(j in cls for i in cls for j in g.successors(i)):
            out.append(cls)
    return out


def nontrivial_components(g: DiGraph) -> list:
    return [c for c in strong_components(g) if not g.is_trivial_class(c)]


def _adjacency(g: DiGraph, order: Sequence) -> np.ndarray:
    pos = {v: k for k, v in enumerate(order)}
    a = np.zeros((len(order), len(order)), dtype=bool)
    for i, j in g.arcs:
        a[pos[i], pos[j]] = True
    return a


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def graph_power(g: DiGraph, k: int) -> DiGraph:
    """Same nodes; arc i->j iff `g` has a path of length exactly `k` from i to j."""
    if k < 1:
        raise ValueError("graph_power needs k >= 1")
    order = sorted(g.nodes)
    base = _adjacency(g, order)
    result = None
    while k:
        if k & 1:
            result = base if result is None else _bool_matmul(result, base)
        k >>= 1
        if k:
            base = _bool_matmul(base, base)
    arcs = {(order[i], order[j]) for i, j in zip(*np.nonzero(result))}
    return DiGraph(g.nodes, frozenset(arcs))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def component_period(g: DiGraph, cls: Iterable) -> int:
    """gcd of circuit lengths of the strongly connected class `cls`."""
    cls = frozenset(cls)
    if g.is_trivial_class(cls):
        raise ValueError(f"class {sorted(cls)} is trivial; it has no circuit")
    start = min(cls)
    level = {start: 0}
    queue = [start]
    for v in queue:
        for w in g.successors(v):
            if w in cls and w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    period = 0
    for v in cls:
        for w in g.successors(v):
            if w in cls:
                period = gcd(period, abs(level[v] + 1 - level[w]))
    return period


def cyclicity(g: DiGraph) -> int:
    """lcm of the periods of the strong components (1 for the empty graph)."""
    periods = [component_period(g, c) for c in strong_components(g)]
    return reduce(_lcm, periods, 1)


def to_dot(g: DiGraph, clusters: Optional[Sequence] = None, name: str = "G") -> str:
    """DOT text with 1-based node labels; each entry of `clusters` becomes a subgraph."""
    lines = [f"digraph {name} {{"]
    clustered = set()
    for k, cls in enumerate(clusters or (), start=1):
        lines.append(f"  subgraph cluster_C{k} {{")
        lines.append(f'    label="C{k}";')
        for v in sorted(cls):
            lines.append(f"    {v + 1};")
            clustered.add(v)
        lines.append("  }")
    for v in sorted(g.nodes - clustered):
        lines.append(f"  {v + 1};")
    for i, j in sorted(g.arcs):
        lines.append(f"  {i + 1} -> {j + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Convex monotone (sub)homogeneous maps given coordinate by coordinate.

A coordinate is either a max of affine functions ``p.x + r`` with (sub)stochastic
``p`` or a log-sum-exp row ``log sum_j M_j exp(x_j)``. Everything here is a pure
function of immutable models.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import scalars as sc
from .graphs import DiGraph

DEFAULT_COMPOSE_CAP = 10**6


class ModelError(ValueError):
    """A model violates one of its invariants.

    `coordinate` and `generator` (0-based, possibly None) locate the first offence.
    """

    def __init__(self, message, coordinate=None, generator=None):
        super().__init__(message)
        self.coordinate = coordinate
        self.generator = generator


class CapExceeded(RuntimeError):
    """Combinatorial enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class Generator:
    p: tuple
    r: sc.Scalar

    def value(self, x):
        return sc.dot(self.p, x) + self.r


@dataclass(frozen=True)
class MaxAffine:
    generators: tuple
    kind = "max_affine"


@dataclass(frozen=True)
class LogSumExp:
    weights: tuple
    kind = "log_sum_exp"


Coordinate = Union[MaxAffine, LogSumExp]


@dataclass(frozen=True)
class MapModel:
    coordinates: tuple
    mode: str = sc.EXACT

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def is_pure_max_affine(self) -> bool:
        return all(isinstance(c, MaxAffine) for c in self.coordinates)

    @property
    def homogeneous(self) -> bool:
        for c in self.coordinates:
            if isinstance(c, MaxAffine):
                if not all(sc.is_one(sum(g.p), self.mode) for g in c.generators):
                    return False
        return True

    @property
    def homogeneity(self) -> str:
        return "homogeneous" if self.homogeneous else "subhomogeneous"

    def __call__(self, x):
        return evaluate(self, x)

    def to_float(self) -> "MapModel":
        """Same map in float mode (exact values rounded)."""
        if self.mode == sc.FLOAT:
            return self
        coords = []
        for c in self.coordinates:
            coords.append(MaxAffine(tuple(
                Generator(tuple(float(a) for a in g.p), float(g.r)) for g in c.generators)))
        return MapModel(tuple(coords), sc.FLOAT)


# -- construction helpers ----------------------------------------------------

def max_affine(rows: Iterable[Iterable], mode: str = sc.EXACT) -> MapModel:
    """Build a pure max-affine model from rows of ``(p, r)`` pairs."""
    coords = []
    for row in rows:
        gens = tuple(Generator(sc.vector(p, mode), sc.convert(r, mode)) for p, r in row)
        coords.append(MaxAffine(gens))
    return MapModel(tuple(coords), mode)


def identity_model(n: int, mode: str = sc.EXACT) -> MapModel:
    return max_affine([[(_dirac(n, i, mode), 0)] for i in range(n)], mode)


def linear_model(P: Sequence[Sequence], mode: str = sc.EXACT) -> MapModel:
    return max_affine([[(row, 0)] for row in P], mode)


def _dirac(n, i, mode):
    return tuple(sc.one(mode) if j == i else sc.zero(mode) for j in range(n))


# -- validation --------------------------------------------------------------

def validate_model(m: MapModel) -> None:
    """Raise :class:`ModelError` naming the first offending coordinate/generator."""
    try:
        sc.check_mode(m.mode)
    except ValueError as exc:
        raise ModelError(str(exc)) from None
    want = Fraction if m.mode == sc.EXACT else float
    n = m.n
    if n == 0:
        raise ModelError("model has no coordinates")
    for i, c in enumerate(m.coordinates):
        if isinstance(c, MaxAffine):
            if not c.generators:
                raise ModelError(f"coordinate {i}: empty generator list", i)
            for k, g in enumerate(c.generators):
                if len(g.p) != n:
                    raise ModelError(f"coordinate {i}, generator {k}: length {len(g.p)} != {n}", i, k)
                for a in (*g.p, g.r):
                    if type(a) is not want:
                        raise ModelError(
                            f"coordinate {i}, generator {k}: {type(a).__name__} value in {m.mode} model",
                            i, k)
                    if m.mode == sc.FLOAT and not math.isfinite(a):
                        raise ModelError(f"coordinate {i}, generator {k}: non-finite value", i, k)
                if any(a < 0 for a in g.p):
                    raise ModelError(f"coordinate {i}, generator {k}: negative entry", i, k)
                s = sum(g.p)
                if s > 1 and not sc.is_one(s, m.mode):
                    raise ModelError(f"coordinate {i}, generator {k}: row sum {s} exceeds 1", i, k)
        elif isinstance(c, LogSumExp):
            if m.mode != sc.FLOAT:
                raise ModelError(f"coordinate {i}: log_sum_exp requires float mode", i)
            if len(c.weights) != n:
                raise ModelError(f"coordinate {i}: weight row length {len(c.weights)} != {n}", i)
            for a in c.weights:
                if type(a) is not float or not math.isfinite(a):
                    raise ModelError(f"coordinate {i}: weights must be finite floats", i)
            if any(a < 0 for a in c.weights):
                raise ModelError(f"coordinate {i}: negative weight", i)
            if not any(a > 0 for a in c.weights):
                raise ModelError(f"coordinate {i}: log_sum_exp row has no positive weight", i)
        else:
            raise ModelError(f"coordinate {i}: unknown coordinate kind", i)


# -- evaluation --------------------------------------------------------------

def _lse(weights, x):
    support = [j for j, w in enumerate(weights) if w > 0]
    shift = max(x[j] for j in support)
    total = sum(weights[j] * math.exp(x[j] - shift) for j in support)
    return shift + math.log(total)


def coordinate_value(c: Coordinate, x):
    if isinstance(c, MaxAffine):
        return max(g.value(x) for g in c.generators)
    return _lse(c.weights, x)


def evaluate(m: MapModel, x) -> tuple:
    """``f(x)``, computed in the model's arithmetic."""
    x = sc.vector(x, m.mode)
    if len(x) != m.n:
        raise ValueError(f"vector of length {len(x)} for a map on R^{m.n}")
    return tuple(coordinate_value(c, x) for c in m.coordinates)


def iterate(m: MapModel, x, k: int) -> tuple:
    """``f^k(x)``; k = 0 returns x."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = sc.vector(x, m.mode)
    for _ in range(k):
        x = evaluate(m, x)
    return x


# -- subdifferentials ----------------------------------------------------------

def _resolve_tol(m: MapModel, tol):
    if m.mode == sc.EXACT:
        if tol not in (None, 0):
            raise ValueError("exact mode uses tol = 0 for active sets")
        return 0
    return sc.DEFAULT_FLOAT_TOL if tol is None else tol


def _dedup_rows(rows, mode):
    out = []
    for p in rows:
        if mode == sc.EXACT:
            if p not in out:
                out.append(p)
        elif not any(sc.sup_norm(p, q) <= sc.FLOAT_EPS for q in out):
            out.append(p)
    return out


def active_generators(m: MapModel, v, tol=None) -> list:
    """Per coordinate, the generators ``(p, r)`` attaining ``f_i(v)``.

    A log-sum-exp coordinate contributes its gradient at v, with the offset that
    makes the affine function tangent at v.
    """
    tol = _resolve_tol(m, tol)
    v = sc.vector(v, m.mode)
    out = []
    for i, c in enumerate(m.coordinates):
        if isinstance(c, MaxAffine):
            values = [g.value(v) for g in c.generators]
            top = max(values)
            active = [g for g, val in zip(c.generators, values) if top - val <= tol]
            if not active:
                raise ArithmeticError(f"coordinate {i}: empty active set (float cancellation?)")
            out.append(active)
        else:
            grad = lse_gradient(c.weights, v)
            out.append([Generator(grad, _lse(c.weights, v) - sc.dot(grad, v))])
    return out


def lse_gradient(weights, v) -> tuple:
    support = [j for j, w in enumerate(weights) if w > 0]
    shift = max(v[j] for j in support)
    terms = [weights[j] * math.exp(v[j] - shift) if weights[j] > 0 else 0.0 for j in range(len(v))]
    total = sum(terms)
    return tuple(t / total for t in terms)


def subdiff_generators(m: MapModel, v, tol=None) -> tuple:
    """Rectangular generator set of ``∂f(v)``: row i lists active row vectors."""
    rows = []
    for gens in active_generators(m, v, tol):
        rows.append(tuple(_dedup_rows([g.p for g in gens], m.mode)))
    return tuple(rows)


def directional_derivative(m: MapModel, v, tol=None) -> MapModel:
    """``y -> f'_v(y)``: active generators at v with zero offsets."""
    rows = subdiff_generators(m, v, tol)
    z = sc.zero(m.mode)
    coords = tuple(MaxAffine(tuple(Generator(p, z) for p in row)) for row in rows)
    return MapModel(coords, m.mode)


# -- recession functions -------------------------------------------------------

@dataclass(frozen=True)
class AdditiveRecession:
    """Additive recession map; a ``None`` coordinate is identically -inf."""
    coordinates: tuple
    mode: str

    @property
    def minus_infinity(self) -> tuple:
        return tuple(c is None for c in self.coordinates)

    @property
    def finite(self) -> bool:
        return not any(self.minus_infinity)

    def model(self) -> MapModel:
        if not self.finite:
            rows = [i for i, flag in enumerate(self.minus_infinity) if flag]
            raise ValueError(f"recession is -inf on rows {rows}")
        return MapModel(self.coordinates, self.mode)

    def evaluate(self, y) -> tuple:
        y = sc.vector(y, self.mode)
        return tuple(-math.inf if c is None else coordinate_value(c, y) for c in self.coordinates)


def additive_recession(m: MapModel) -> AdditiveRecession:
    """Keep only the generators of row sum 1; a row with none is flagged -inf."""
    coords = []
    for c in m.coordinates:
        if isinstance(c, LogSumExp):
            coords.append(c)
            continue
        keep = tuple(g for g in c.generators if sc.is_one(sum(g.p), m.mode))
        coords.append(MaxAffine(keep) if keep else None)
    return AdditiveRecession(tuple(coords), m.mode)


def multiplicative_recession(m: MapModel) -> MapModel:
    """``x -> lim f(t x)/t``: offsets dropped, log-sum-exp rows become a max of Diracs."""
    z = sc.zero(m.mode)
    coords = []
    for c in m.coordinates:
        if isinstance(c, MaxAffine):
            ps = _dedup_rows([g.p for g in c.generators], m.mode)
        else:
            ps = [_dirac(m.n, j, m.mode) for j, w in enumerate(c.weights) if w > 0]
        coords.append(MaxAffine(tuple(Generator(p, z) for p in ps)))
    return MapModel(tuple(coords), m.mode)


# -- structural operations -----------------------------------------------------

def restrict(m: MapModel, nodes: Iterable[int]) -> MapModel:
    """``f_NN = r_N o f o i_N`` (coordinates outside N pinned at 0)."""
    N = sorted(set(nodes))
    if not N:
        raise ValueError("restriction to an empty node set")
    if N[0] < 0 or N[-1] >= m.n:
        raise ValueError("node outside the model")
    coords = []
    for i in N:
        c = m.coordinates[i]
        if isinstance(c, MaxAffine):
            gens = tuple(Generator(tuple(g.p[j] for j in N), g.r) for g in c.generators)
            coords.append(MaxAffine(gens))
        else:
            w = tuple(c.weights[j] for j in N)
            if not any(a > 0 for a in w):
                raise ModelError(f"coordinate {i}: log_sum_exp support disjoint from {N}", i)
            coords.append(LogSumExp(w))
    return MapModel(tuple(coords), m.mode)


def lift_subhomogeneous(m: MapModel) -> MapModel:
    """Homogeneous map on n+1 coordinates, ``(x, y) -> (y + f(x - y), y)``."""
    n = m.n
    one, zero = sc.one(m.mode), sc.zero(m.mode)
    coords = []
    for c in m.coordinates:
        if isinstance(c, MaxAffine):
            gens = tuple(Generator(g.p + (one - sum(g.p),), g.r) for g in c.generators)
            coords.append(MaxAffine(gens))
        else:
            coords.append(LogSumExp(c.weights + (0.0,)))
    coords.append(MaxAffine((Generator(_dirac(n + 1, n, m.mode), zero),)))
    return MapModel(tuple(coords), m.mode)


def _dedup_generators(gens, mode):
    """Drop duplicates and generators dominated by one with the same p."""
    best = {}
    order = []
    for g in gens:
        key = g.p if mode == sc.EXACT else tuple(round(a, 12) for a in g.p)
        if key not in best:
            best[key] = g
            order.append(key)
        elif g.r > best[key].r:
            best[key] = g
    return tuple(best[k] for k in order)


def compose(m1: MapModel, m2: MapModel, cap: int = DEFAULT_COMPOSE_CAP) -> MapModel:
    """Generator presentation of ``m1 o m2`` for pure max-affine models.

    A generator (p, r) of m1 combined with one m2 generator ``(q_j, s_j)`` per
    ``j`` in the support of p gives ``(sum p_j q_j, r + sum p_j s_j)``.
    """
    if not (m1.is_pure_max_affine and m2.is_pure_max_affine):
        raise ValueError("compose needs pure max_affine models")
    if m1.n != m2.n or m1.mode != m2.mode:
        raise ValueError("compose needs models of equal dimension and mode")
    n, mode = m1.n, m1.mode
    zero = sc.zero(mode)
    produced = 0
    coords = []
    for c in m1.coordinates:
        gens = []
        for g in c.generators:
            support = [j for j in range(n) if g.p[j]]
            choices = [m2.coordinates[j].generators for j in support]
            count = math.prod(len(ch) for ch in choices)
            produced += count
            if produced > cap:
                raise CapExceeded(f"composition would produce more than {cap} generators")
            for pick in itertools.product(*choices):
                p = [zero] * n
                r = g.r
                for j, h in zip(support, pick):
                    w = g.p[j]
                    r += w * h.r
                    for k, a in enumerate(h.p):
                        if a:
                            p[k] += w * a
                gens.append(Generator(tuple(p), r))
        coords.append(MaxAffine(_dedup_generators(gens, mode)))
    return MapModel(tuple(coords), mode)


def power(m: MapModel, k: int, cap: int = DEFAULT_COMPOSE_CAP) -> MapModel:
    """``f^k`` as a pure max-affine model (``f o f^(k-1)``)."""
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = m
    for _ in range(k - 1):
        out = compose(m, out, cap)
    return out


def graph_of_map(m: MapModel) -> DiGraph:
    """Arc i->j iff coordinate i depends increasingly on x_j at infinity."""
    arcs = set()
    for i, c in enumerate(m.coordinates):
        if isinstance(c, MaxAffine):
            for g in c.generators:
                arcs.update((i, j) for j, a in enumerate(g.p) if a > 0)
        else:
            arcs.update((i, j) for j, a in enumerate(c.weights) if a > 0)
    return DiGraph(frozenset(range(m.n)), frozenset(arcs))


# -- JSON ---------------------------------------------------------------------

def model_from_dict(doc: dict) -> MapModel:
    """Parse the model JSON document; raises :class:`ModelError` on schema problems."""
    try:
        n = int(doc["n"])
        mode = doc.get("mode", sc.EXACT)
        sc.check_mode(mode)
        coords = []
        for i, c in enumerate(doc["coordinates"]):
            kind = c["kind"]
            if kind == "max_affine":
                gens = tuple(
                    Generator(_parse_row(g["p"], mode, i), _parse_scalar(g["r"], mode, i))
                    for g in c["generators"])
                coords.append(MaxAffine(gens))
            elif kind == "log_sum_exp":
                coords.append(LogSumExp(_parse_row(c["weights"], mode, i)))
            else:
                raise ModelError(f"coordinate {i}: unknown kind {kind!r}", i)
    except ModelError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model document: {exc}") from None
    if len(coords) != n:
        raise ModelError(f"document declares n={n} but has {len(coords)} coordinates")
    return MapModel(tuple(coords), mode)


def _parse_scalar(value, mode, i):
    if mode == sc.EXACT:
        if isinstance(value, float):
            raise ModelError(f"coordinate {i}: JSON number {value} in exact mode (use a string)", i)
        return sc.to_exact(value)
    if isinstance(value, str):
        raise ModelError(f"coordinate {i}: string scalar {value!r} in float mode", i)
    return sc.to_float(value)


def _parse_row(values, mode, i):
    return tuple(_parse_scalar(v, mode, i) for v in values)


def model_to_dict(m: MapModel) -> dict:
    coords = []
    for c in m.coordinates:
        if isinstance(c, MaxAffine):
            coords.append({"kind": "max_affine", "generators": [
                {"p": sc.format_vector(g.p), "r": sc.format_scalar(g.r)} for g in c.generators]})
        else:
            coords.append({"kind": "log_sum_exp", "weights": sc.format_vector(c.weights)})
    return {"n": m.n, "mode": m.mode, "coordinates": coords}


def load_model(path) -> MapModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))

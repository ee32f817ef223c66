"""Exact rational polyhedra and the eigenspace of a piecewise-affine map.

The eigenspace of a max-affine map is the union, over policy selections phi
(one generator per coordinate), of the polyhedra

    K_phi = {x : x_i = p^phi(i).x + r^phi(i) - lam >= p.x + r - lam  for every p of row i}.

All arithmetic here is over Fractions; the LP solver is a dense two-phase
simplex with Bland's rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import scalars as sc
from .critical import CriticalData, critical_data
from .model import CapExceeded, MapModel, MaxAffine
from .spectral import verify_eigenpair

DEFAULT_ENUM_CAP = 10**5


def _q(v) -> Fraction:
    return sc.to_exact(v)


@dataclass(frozen=True)
class RationalPolyhedron:
    """``{x in Q^dim : a.x = b for equalities, a.x <= b for inequalities}``."""

    dim: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        for name in ("equalities", "inequalities"):
            rows = tuple((tuple(_q(a) for a in row), _q(b)) for row, b in getattr(self, name))
            for row, _ in rows:
                if len(row) != self.dim:
                    raise ValueError(f"constraint of length {len(row)} in dimension {self.dim}")
            object.__setattr__(self, name, rows)

    def contains(self, x) -> bool:
        x = sc.vector(x, sc.EXACT)
        return (all(sc.dot(a, x) == b for a, b in self.equalities)
                and all(sc.dot(a, x) <= b for a, b in self.inequalities))

    def to_dict(self) -> dict:
        def enc(rows):
            return [{"a": sc.format_vector(a), "b": sc.format_scalar(b)} for a, b in rows]
        return {"dim": self.dim, "equalities": enc(self.equalities),
                "inequalities": enc(self.inequalities)}

    @classmethod
    def from_dict(cls, doc: dict) -> "RationalPolyhedron":
        def dec(rows):
            return [([sc.to_exact(a) for a in r["a"]], sc.to_exact(r["b"])) for r in rows]
        return cls(int(doc["dim"]), dec(doc.get("equalities", [])), dec(doc.get("inequalities", [])))


@dataclass(frozen=True)
class PolicySelection:
    """Generator index chosen in each coordinate."""

    choice: tuple

    def __iter__(self):
        return iter(self.choice)


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    x: Optional[tuple] = None
    value: Optional[Fraction] = None
    certificate: Optional[tuple] = None  # Farkas multipliers when infeasible
    ray: Optional[tuple] = None  # improving direction when unbounded

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


# -- linear algebra --------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)``."""
    M = [[_q(a) for a in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [a / pv for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], n: int) -> list:
    """A basis of ``{x in Q^n : A x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    R, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


# -- simplex ---------------------------------------------------------------

class _Tableau:
    """Dense tableau ``T x = b`` with an explicit basis; Bland's rule pivoting."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, r, c):
        A, b = self.A, self.b
        pv = A[r][c]
        if pv != 1:
            A[r] = [a / pv if a else a for a in A[r]]
            b[r] = b[r] / pv
        prow = A[r]
        nz = [j for j, t in enumerate(prow) if t]
        for i in range(len(A)):
            f = A[i][c]
            if i != r and f:
                row = A[i]
                for j in nz:
                    row[j] -= f * prow[j]
                b[i] -= f * b[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        red = list(cost)
        for i, j in enumerate(self.basis):
            cj = cost[j]
            if cj:
                for k, t in enumerate(self.A[i]):
                    if t:
                        red[k] -= cj * t
        return red

    def minimize(self, cost, allowed):
        """Returns None at optimality or the entering column of an unbounded ray."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in allowed if red[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.A):
                if row[enter] > 0:
                    ratio = self.b[i] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)


def solve_lp(n: int, equalities=(), inequalities=(), objective=None) -> LPResult:
    """Minimize ``objective . x`` over free x with ``a.x = b`` and ``a.x <= b``.

    Without an objective this is a feasibility problem. Infeasibility comes
    with multipliers u (nonnegative on inequalities) such that
    ``sum u_i a_i = 0`` and ``sum u_i b_i < 0``.
    """
    rows = [(tuple(_q(a) for a in row), _q(b), False) for row, b in equalities]
    rows += [(tuple(_q(a) for a in row), _q(b), True) for row, b in inequalities]
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: x+ (n), x- (n), slacks, artificials (m)
    n_cols = 2 * n + n_slack + m
    art0 = 2 * n + n_slack
    A, b, signs = [], [], []
    k = 0
    for i, (a, bi, ineq) in enumerate(rows):
        row = list(a) + [-v for v in a] + [Fraction(0)] * (n_slack + m)
        if ineq:
            row[2 * n + k] = Fraction(1)
            k += 1
        s = -1 if bi < 0 else 1
        row = [s * v for v in row]
        row[art0 + i] = Fraction(1)
        A.append(row)
        b.append(s * bi)
        signs.append(s)
    tab = _Tableau(A, b, [art0 + i for i in range(m)])

    phase1 = [Fraction(0)] * art0 + [Fraction(1)] * m
    tab.minimize(phase1, range(n_cols))
    infeas = sum(tab.b[i] for i, j in enumerate(tab.basis) if j >= art0)
    if infeas > 0:
        red = tab.reduced_costs(phase1)
        y = [1 - red[art0 + i] for i in range(m)]
        u = tuple(-s * yi for s, yi in zip(signs, y))
        return LPResult("infeasible", certificate=u)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= art0:
            c = next((j for j in range(art0) if tab.A[i][j] != 0), None)
            if c is None:
                continue
            tab.pivot(i, c)
        keep.append(i)
    tab.A = [tab.A[i] for i in keep]
    tab.b = [tab.b[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    def point():
        z = [Fraction(0)] * art0
        for i, j in enumerate(tab.basis):
            z[j] = tab.b[i]
        return tuple(z[j] - z[n + j] for j in range(n))

    if objective is None:
        return LPResult("optimal", point(), Fraction(0))
    c = [_q(v) for v in objective]
    cost = c + [-v for v in c] + [Fraction(0)] * (n_slack + m)
    enter = tab.minimize(cost, range(art0))
    if enter is not None:
        d = [Fraction(0)] * art0
        d[enter] = Fraction(1)
        for i, j in enumerate(tab.basis):
            d[j] = -tab.A[i][enter]
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return LPResult("unbounded", point(), ray=ray)
    x = point()
    return LPResult("optimal", x, sc.dot(c, x) if n else Fraction(0))


def lp_feasible(poly: RationalPolyhedron) -> LPResult:
    return solve_lp(poly.dim, poly.equalities, poly.inequalities)


def implicit_equalities(poly: RationalPolyhedron, start: Optional[tuple] = None) -> list:
    """Indices of inequalities tight at every point of a nonempty polyhedron."""
    points = [start] if start is not None else []
    implicit = []
    for k, (a, b) in enumerate(poly.inequalities):
        if any(sc.dot(a, x) < b for x in points):
            continue
        res = solve_lp(poly.dim, poly.equalities, poly.inequalities, objective=a)
        if res.status == "optimal" and res.value == b:
            implicit.append(k)
        elif res.x is not None:
            points.append(res.x)
    return implicit


def affine_hull(poly: RationalPolyhedron):
    """``(point, direction basis)`` of the affine hull, or None if empty."""
    res = lp_feasible(poly)
    if not res.feasible:
        return None
    implicit = implicit_equalities(poly, res.x)
    eqs = [a for a, _ in poly.equalities] + [poly.inequalities[k][0] for k in implicit]
    return res.x, nullspace(eqs, poly.dim)


def affine_dimension(poly: RationalPolyhedron) -> int:
    """Dimension of the affine hull; -1 for the empty set."""
    hull = affine_hull(poly)
    return -1 if hull is None else len(hull[1])


# -- eigenspace ------------------------------------------------------------

def _generator_rows(m: MapModel):
    if m.mode != sc.EXACT or not m.is_pure_max_affine:
        raise ValueError("eigenspace computations need an exact pure max-affine model")
    return [c.generators for c in m.coordinates]


def _cell_constraints(rows, i, k, lam):
    """Constraints contributed by coordinate i choosing generator k."""
    n = len(rows)
    g = rows[i][k]
    e = [Fraction(int(j == i)) for j in range(n)]
    eq = (tuple(ei - pj for ei, pj in zip(e, g.p)), g.r - lam)
    ineqs = [(tuple(qj - ej for qj, ej in zip(h.p, e)), lam - h.r)
             for t, h in enumerate(rows[i]) if t != k]
    return eq, ineqs


def cell(m: MapModel, lam, phi: Iterable[int]) -> RationalPolyhedron:
    """The polyhedron K_phi."""
    rows = _generator_rows(m)
    lam = _q(lam)
    eqs, ineqs = [], []
    for i, k in enumerate(phi):
        eq, le = _cell_constraints(rows, i, k, lam)
        eqs.append(eq)
        ineqs.extend(le)
    return RationalPolyhedron(m.n, eqs, ineqs)


def eigenspace_enumerate(m: MapModel, lam, cap: int = DEFAULT_ENUM_CAP) -> list:
    """Nonempty cells ``(PolicySelection, K_phi)``, in lexicographic phi order.

    Partial selections are pruned as soon as their constraints are infeasible.
    """
    rows = _generator_rows(m)
    lam = _q(lam)
    total = 1
    for r in rows:
        total *= len(r)
    if total > cap:
        raise CapExceeded(f"{total} policy selections exceed the cap {cap}")
    out = []

    def extend(i, phi, eqs, ineqs):
        if not solve_lp(m.n, eqs, ineqs).feasible:
            return
        if i == m.n:
            out.append((PolicySelection(tuple(phi)), RationalPolyhedron(m.n, eqs, ineqs)))
            return
        for k in range(len(rows[i])):
            eq, le = _cell_constraints(rows, i, k, lam)
            extend(i + 1, phi + [k], eqs + [eq], ineqs + le)

    extend(0, [], [], [])
    return out


def eigenspace_membership(m: MapModel, lam, x, tol=None) -> bool:
    return verify_eigenpair(m, lam, x, tol)[0]


def eigenspace_dimension(m: MapModel, lam, cd: Optional[CriticalData] = None,
                         cap: int = DEFAULT_ENUM_CAP, cells: Optional[list] = None) -> int:
    """Dimension of the affine hull of the eigenspace restricted to the critical nodes.

    Each cell contributes its affine hull (a feasible point and the null space
    of its explicit and implicit equalities); the projections onto the
    critical coordinates are pooled and the rank of the pooled directions is
    returned. -1 when there is no eigenvector for lam. ``cells`` may carry a
    previous enumeration.
    """
    if cells is None:
        cells = eigenspace_enumerate(m, lam, cap)
    if not cells:
        return -1
    hulls = [affine_hull(K) for _, K in cells]
    if cd is None:
        cd = critical_data(m, hulls[0][0], _q(lam))
    C = sorted(cd.nodes)
    base = [hulls[0][0][j] for j in C]
    dirs = []
    for x0, basis in hulls:
        dirs.append([x0[j] - b for j, b in zip(C, base)])
        dirs.extend([d[j] for j in C] for d in basis)
    dirs = [d for d in dirs if any(d)]
    return rank(dirs)

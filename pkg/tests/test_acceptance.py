"""Acceptance suite: twelve criteria, each with its tolerance and time bound.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import math
import random
import sys
import time
from fractions import Fraction as Q
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from convexspec import fixtures as fx  # noqa: E402
from convexspec import scalars as sc  # noqa: E402
from convexspec.cli import run  # noqa: E402
from convexspec.critical import critical_data, final_graph_of_rect  # noqa: E402
from convexspec.fixtures import F1_SUBDIFF_ROWS  # noqa: E402
from convexspec.graphs import graph_power, strong_components  # noqa: E402
from convexspec.markov import final_graph, matrix_power  # noqa: E402
from convexspec.maxplus import maxplus_critical, maxplus_eigen, maxplus_rho, maxplus_to_model  # noqa: E402
from convexspec.mdp import brute_force_lambda, load_mdp, mdp_to_map, optimal_class_check  # noqa: E402
from convexspec.model import compose, evaluate, power  # noqa: E402
from convexspec.polyhedra import (affine_hull, eigenspace_dimension, eigenspace_enumerate,  # noqa: E402
                                  solve_lp)
from convexspec.spectral import (find_eigenvector, periodic_limit, spectral_projector,  # noqa: E402
                                 verify_eigenpair)
from helpers import (FIXTURES, brute_cycle_mean, join_iterate, random_irreducible_maxplus,  # noqa: E402
                     random_model, random_point, random_stochastic_matrix)

CRITERIA = {
    1: ("final graph of the rectangular example set", 1),
    2: ("critical data independent of the eigenvector", 1),
    3: ("eigenspace of F1 and its dimension", 1),
    4: ("log-sum-exp spectrum and uniqueness", 5),
    5: ("cyclicity 2 example, orbit and dimensions", 10),
    6: ("critical graph of powers (random)", 60),
    7: ("final graph of matrix powers (random)", 30),
    8: ("orbit periods divide the cyclicity (random)", 120),
    9: ("eigenvectors determined on critical nodes", 60),
    10: ("max-plus critical graph cross-oracle", 60),
    11: ("MDP optimal classes", 10),
    12: ("Moreau example", 1),
}


def criterion(k):
    return pytest.mark.criterion(k, *CRITERIA[k])


@pytest.fixture
def budget(request):
    """Yields, then fails the test if it ran past its time bound."""
    k, _, bound = request.node.get_closest_marker("criterion").args
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    request.node.user_properties.append(("elapsed", elapsed))
    assert elapsed < bound, f"criterion {k} took {elapsed:.2f}s, bound {bound}s"


def normalized(v):
    return tuple(a - v[-1] for a in v)


@criterion(1)
def test_c01_rect_final_graph(budget):
    g = final_graph_of_rect(F1_SUBDIFF_ROWS)
    assert g.arcs == {(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)}
    assert strong_components(g) == [frozenset({0, 1}), frozenset({2})]


@criterion(2)
def test_c02_independence(budget):
    a = critical_data(fx.f1(), (0, 0, 0), 0)
    b = critical_data(fx.f1(), (0, 0, -2), 0)
    assert a == b
    assert a.classes == (frozenset({0, 1}), frozenset({2}))


@criterion(3)
def test_c03_f1_eigenspace(budget):
    f = fx.f1()
    cells = eigenspace_enumerate(f, 0)
    assert cells
    # each cell lies in {x1 = x2 >= x3 >= x1 - 2}
    for _, K in cells:
        def extreme(c):
            res = solve_lp(3, K.equalities, K.inequalities, objective=c)
            return res.value if res.status == "optimal" else -math.inf
        assert extreme((1, -1, 0)) == 0 and extreme((-1, 1, 0)) == 0
        assert extreme((1, 0, -1)) >= 0 and extreme((-1, 0, 1)) >= -2
    # and the cells cover it
    grid = [Q(k, 2) for k in range(-6, 7)]
    for x1 in grid:
        for x3 in grid:
            inside = x1 - 2 <= x3 <= x1
            assert any(K.contains((x1, x1, x3)) for _, K in cells) == inside
    cd = critical_data(f, (0, 0, 0), 0)
    assert eigenspace_dimension(f, 0, cd, cells=cells) == 2 == cd.class_count


@criterion(4)
def test_c04_log_sum_exp(budget):
    l2 = math.log(2)
    code, env = run(["spectrum", str(FIXTURES / "f2.json"), "--tol", "1e-10"])
    out = env["outputs"]
    assert code == 0 and out["status"] == "converged"
    assert abs(out["lambda"] - l2) <= 1e-8
    v = tuple(out["v"])
    d = [a - b for a, b in zip(v, (l2, 3 * l2, 0.0))]
    assert max(d) - min(d) <= 1e-7

    m = fx.f2()
    cd = critical_data(m, v, out["lambda"], 1e-7)
    assert cd.classes == (frozenset({0, 1, 2}),)
    lam = out["lambda"]
    ref = normalized(v)
    for shift in ((0.7, -0.3, 1.1), (-2.0, 0.5, 0.25)):
        z = join_iterate(m, lam, tuple(a + s for a, s in zip(v, shift)))
        w = spectral_projector(m, lam, z, 1e-13)
        assert sc.sup_norm(normalized(w), ref) <= 1e-7


@criterion(5)
def test_c05_cyclicity_two(budget):
    f = fx.f4()
    cd = critical_data(f, (0, 0, 0), 0)
    assert cd.cyclicity == 2
    res = periodic_limit(f, 0, (1, 0, 0), cd.cyclicity)
    assert res.period == 2 and set(res.points) == {(1, 0, 0), (0, 1, 0)}
    f2 = compose(f, f)
    assert eigenspace_dimension(f, 0) == 2
    assert eigenspace_dimension(f2, 0) == 3 == sum(cd.class_periods())


@criterion(6)
def test_c06_critical_graph_powers(budget):
    rng = random.Random(60)
    for _ in range(120):
        m = random_model(rng)
        g = critical_data(m, [0] * m.n, 0).graph
        for k in (2, 3):
            assert critical_data(power(m, k), [0] * m.n, 0).graph == graph_power(g, k)


@criterion(7)
def test_c07_matrix_powers(budget):
    rng = random.Random(70)
    for _ in range(220):
        P = random_stochastic_matrix(rng, rng.randint(1, 7))
        k = rng.randint(1, 5)
        assert final_graph(matrix_power(P, k)) == graph_power(final_graph(P), k)


@criterion(8)
def test_c08_orbit_periods(budget):
    rng = random.Random(80)
    for _ in range(120):
        m = random_model(rng)
        c = critical_data(m, [0] * m.n, 0).cyclicity
        mf = m.to_float()
        x = tuple(float(a) for a in random_point(rng, m.n))
        res = periodic_limit(mf, 0.0, x, c, 1e-10)
        assert c % res.period == 0
        y = res.points[0]
        for _ in range(c):
            y = evaluate(mf, y)
        assert sc.sup_norm(y, res.points[0]) <= 1e-9


def sampled_eigenvectors(m, rng, count=6):
    """Exact eigenvectors: LP vertices of the cells cut by a box, in random directions."""
    n = m.n
    box = [(tuple(int(j == i) * s for j in range(n)), 3) for i in range(n) for s in (1, -1)]
    out = []
    for _, K in eigenspace_enumerate(m, 0):
        out.append(affine_hull(K)[0])
        for _ in range(count):
            c = tuple(rng.randint(-3, 3) for _ in range(n))
            res = solve_lp(n, K.equalities, list(K.inequalities) + box, objective=c)
            if res.status == "optimal":
                out.append(res.x)
    for v in out:
        assert evaluate(m, v) == v
    return out


def check_critical_determination(m, rng):
    cd = critical_data(m, [0] * m.n, 0)
    C = sorted(cd.nodes)
    vs = sampled_eigenvectors(m, rng)
    # class-wise constant differences, and agreement on N^c forces equality
    for u in vs[:8]:
        for w in vs:
            for cls in cd.classes:
                assert len({u[i] - w[i] for i in cls}) == 1
            if all(u[i] == w[i] for i in C):
                assert u == w
    mf = m.to_float()
    for u in vs[:4]:
        uf = tuple(float(a) for a in u)
        assert sc.sup_norm(spectral_projector(mf, 0.0, uf, 1e-12), uf) <= 1e-9
        # raise non-critical coordinates, restore super-harmonicity, project back
        z = tuple(a + (0.0 if i in cd.nodes else rng.uniform(0.1, 2.0)) for i, a in enumerate(uf))
        z = join_iterate(mf, 0.0, z)
        w = spectral_projector(mf, 0.0, z, 1e-12)
        assert verify_eigenpair(mf, 0.0, w, 1e-9)[0]
        if all(abs(w[i] - uf[i]) <= 1e-12 for i in C):
            assert sc.sup_norm(w, uf) <= 1e-9
        for t in vs[-4:]:
            tf = tuple(float(a) for a in t)
            low = tuple(min(a, b) for a, b in zip(uf, tf))
            p = spectral_projector(mf, 0.0, low, 1e-12)
            assert verify_eigenpair(mf, 0.0, p, 1e-9)[0]
            assert all(abs(p[i] - low[i]) <= 1e-9 for i in C)


@criterion(9)
def test_c09_critical_determination(budget):
    rng = random.Random(90)
    for m in (fx.f1(), fx.f3(), fx.f4()):
        check_critical_determination(m, rng)
    for _ in range(30):
        check_critical_determination(random_model(rng, n=rng.randint(1, 4)), rng)


@criterion(10)
def test_c10_maxplus(budget):
    rng = random.Random(100)
    for _ in range(120):
        n = rng.randint(1, 6)
        A = random_irreducible_maxplus(rng, n)
        lam, v = maxplus_eigen(A)
        assert maxplus_critical(A, lam, v) == critical_data(maxplus_to_model(A), v, lam).graph
        if n <= 5:
            assert maxplus_rho(A) == brute_cycle_mean(A)


@criterion(11)
def test_c11_mdp(budget):
    for name in ("f1_mdp.json", "f4_mdp.json"):
        mdp = load_mdp(FIXTURES / name)
        res = find_eigenvector(mdp_to_map(mdp))
        assert verify_eigenpair(mdp_to_map(mdp), res.lam, res.v, 0)[0]
        assert brute_force_lambda(mdp) == 0 == res.lam
        rep = optimal_class_check(mdp, res.lam, res.v)
        assert rep.ok and rep.certified
        assert all(ok and val == 0 for _, val, ok in rep.certified)


@criterion(12)
def test_c12_moreau(budget):
    k = fx.moreau_k()
    cd = critical_data(k, (0, 0), 0)
    assert cd.classes == (frozenset({0, 1}),)
    assert eigenspace_dimension(k, 0, cd) == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

import random
from fractions import Fraction as Q

import pytest

from convexspec import fixtures as fx
from convexspec.critical import (InvalidEigenpair, critical_data, final_graph_of_rect,
                                 invariant_critical_classes, section, witness_matrix)
from convexspec.fixtures import F1_SUBDIFF_ROWS
from convexspec.graphs import DiGraph, cyclicity, graph_power
from convexspec.markov import final_classes_of_matrix, final_graph, invariant_measure
from convexspec.model import evaluate, power
from helpers import random_model, random_point, random_stochastic_matrix, random_stochastic_row, rect_final_graph_oracle

F1_CRITICAL_ARCS = {(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)}


class TestFinalGraphOfRect:
    def test_f1_subdifferential(self):
        g = final_graph_of_rect(F1_SUBDIFF_ROWS)
        assert g.arcs == F1_CRITICAL_ARCS and g.nodes == {0, 1, 2}

    def test_all_substochastic(self):
        rows = [[(Q(1, 2), Q(0))], [(Q(0), Q(1, 3))]]
        assert final_graph_of_rect(rows) == DiGraph()

    def test_singletons_match_markov(self):
        rng = random.Random(0)
        for _ in range(50):
            P = random_stochastic_matrix(rng, rng.randint(1, 6))
            assert final_graph_of_rect([[row] for row in P]) == final_graph(P)

    def test_trivial_final_class_is_peeled(self):
        # node 0 has no stochastic row; node 1 may stay put or move to 0
        rows = [[(Q(1, 2), Q(0))], [(Q(0), Q(1)), (Q(1), Q(0))]]
        assert final_graph_of_rect(rows) == DiGraph.from_arcs({(1, 1)})

    def test_random_against_vertex_oracle(self):
        rng = random.Random(1)
        for _ in range(200):
            n = rng.randint(1, 4)
            rows = []
            for _ in range(n):
                row = []
                for _ in range(rng.randint(1, 3)):
                    p = random_stochastic_row(rng, n)
                    if rng.random() < 0.25:
                        p = tuple(a * Q(1, 2) for a in p)
                    row.append(p)
                rows.append(row)
            assert final_graph_of_rect(rows) == rect_final_graph_oracle(rows)


class TestCriticalData:
    def test_f1(self):
        cd = critical_data(fx.f1(), (0, 0, 0), 0)
        assert cd.classes == (frozenset({0, 1}), frozenset({2}))
        assert cd.cyclicity == 1 and cd.class_count == 2
        assert cd.graph.arcs == F1_CRITICAL_ARCS

    def test_f1_independent_of_eigenvector(self):
        assert critical_data(fx.f1(), (0, 0, -2), 0) == critical_data(fx.f1(), (0, 0, 0), 0)

    def test_f4(self):
        cd = critical_data(fx.f4(), (0, 0, 0), 0)
        assert cd.classes == (frozenset({0, 1}), frozenset({2}))
        assert cd.cyclicity == 2
        assert cd.class_periods() == (2, 1)

    def test_invalid_pair(self):
        with pytest.raises(InvalidEigenpair):
            critical_data(fx.f1(), (0, 0, -3), 0)

    def test_f4_square_orbit_classes(self):
        cd = critical_data(power(fx.f4(), 2), (0, 0, 0), 0)
        assert cd.class_count == 3 and cd.cyclicity == 1

    def test_independence_across_sampled_eigenvectors(self):
        f = fx.f1()
        ref = critical_data(f, (0, 0, 0), 0)
        for v in [(0, 0, -1), (1, 1, 0), (Q(1, 2), Q(1, 2), Q(-3, 2)), (5, 5, 3)]:
            assert critical_data(f, v, 0) == ref

    def test_critical_graph_of_powers_small(self):
        rng = random.Random(2)
        for _ in range(30):
            m = random_model(rng)
            g = critical_data(m, [0] * m.n, 0).graph
            for k in (2, 3):
                assert critical_data(power(m, k), [0] * m.n, 0).graph == graph_power(g, k)


class TestWitness:
    def test_f1(self):
        P = witness_matrix(fx.f1(), (0, 0, 0), 0)
        assert final_classes_of_matrix(P) == [frozenset({0, 1}), frozenset({2})]

    def test_f4_is_derivative(self):
        assert witness_matrix(fx.f4(), (0, 0, 0), 0) == ((0, 1, 0), (1, 0, 0), (0, 0, 1))

    def test_f2_is_jacobian(self):
        import math
        l2 = math.log(2)
        P = witness_matrix(fx.f2(), (l2, 3 * l2, 0.0), l2, 1e-9)
        expect = ((0.5, 0.5, 0.0), (0.0, 0.5, 0.5), (1.0, 0.0, 0.0))
        for row, e in zip(P, expect):
            assert row == pytest.approx(e, abs=1e-12)

    def test_attained_random(self):
        rng = random.Random(3)
        for _ in range(40):
            m = random_model(rng)
            cd = critical_data(m, [0] * m.n, 0)
            P = witness_matrix(m, [0] * m.n, 0)
            assert final_graph(P) == cd.graph
            assert cyclicity(final_graph(P)) == cd.cyclicity

    def test_measure_inequality(self):
        rng = random.Random(4)
        for _ in range(20):
            m = random_model(rng)
            P = witness_matrix(m, [0] * m.n, 0)
            for F in final_classes_of_matrix(P):
                mu = invariant_measure(P, F)
                for _ in range(20):
                    x = random_point(rng, m.n)
                    fx_ = evaluate(m, x)
                    assert sum(w * fx_[i] for i, w in mu.items()) >= sum(w * x[i] for i, w in mu.items())


class TestInvariantAndSection:
    def test_ex_f4(self):
        f = fx.ex_f4()
        cd = critical_data(f, (0, 0, 0), 0)
        assert cd.classes == (frozenset({1}), frozenset({2}))
        assert invariant_critical_classes(f, (0, 0, 0), 0) == [frozenset({2})]

    def test_f1_only_third_invariant(self):
        # (1/2, 0, 1/2) is active in row 1 at 0 and leaves {1, 2}
        assert invariant_critical_classes(fx.f1(), (0, 0, 0), 0) == [frozenset({2})]

    def test_single_class(self):
        assert invariant_critical_classes(fx.moreau_k(), (0, 0), 0) == [frozenset({0, 1})]

    def test_sections(self):
        cd = critical_data(fx.f1(), (0, 0, 0), 0)
        assert section(cd) == {0, 2}
        assert section(critical_data(fx.f4(), (0, 0, 0), 0)) == {0, 2}
        assert section(cd, [1, 2]) == {1, 2}
        with pytest.raises(ValueError):
            section(cd, [0, 1, 2])

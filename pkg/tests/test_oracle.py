import itertools

import pytest
from hypothesis import given, settings

from starcanon.graph import Graph, apply, gen_complete, gen_cycle, gen_path, gen_star, cherry
from starcanon.oracle import (OracleRefused, all_graphs, brute_force, graph_from_code, iso_oracle,
                              pair_slots)

from conftest import graphs, graphs_with_perm


def naive_count(g):
    return sum(apply(p, g) == g for p in itertools.permutations(range(g.n)))


def test_triangle():
    assert brute_force(gen_complete(3)).aut_count == 6


def test_empty_four():
    assert brute_force(Graph.empty(4)).aut_count == 24


def test_directed_triangle_by_hand():
    g = gen_cycle(3, directed=True)
    autos = [p for p in itertools.permutations(range(3)) if apply(p, g) == g]
    assert sorted(autos) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    assert brute_force(g).aut_count == 3


def test_star_of_cherries_pin():
    # value recorded from the first oracle run and frozen
    assert brute_force(gen_star(2, cherry(), 0)).aut_count == 8


def test_min_matrix_is_minimal():
    g = gen_path(4)
    best = min(apply(p, g).matrix_bytes() for p in itertools.permutations(range(4)))
    assert brute_force(g).min_matrix == best


def test_refuses_over_cap():
    with pytest.raises(OracleRefused):
        brute_force(Graph.empty(9))
    with pytest.raises(OracleRefused):
        iso_oracle(Graph.empty(9), Graph.empty(9))


@settings(max_examples=60)
@given(graphs(max_n=5))
def test_count_matches_naive(g):
    assert brute_force(g).aut_count == naive_count(g)


@settings(max_examples=60)
@given(graphs_with_perm(max_n=6))
def test_invariant_under_relabeling(gp):
    g, p = gp
    a, b = brute_force(g), brute_force(apply(p, g))
    assert a.aut_count == b.aut_count
    assert a.min_matrix == b.min_matrix
    assert a.min_matrix <= g.matrix_bytes()


class TestIso:
    def test_relabeled(self):
        g = gen_path(5)
        assert iso_oracle(g, apply((4, 2, 0, 1, 3), g))

    def test_path_vs_triangle(self):
        assert not iso_oracle(gen_path(3), gen_complete(3))

    def test_cycle_vs_reversal(self):
        g = gen_cycle(3, directed=True)
        rev = Graph(3, g.adj.T)
        assert iso_oracle(g, rev)

    def test_order_mismatch(self):
        assert not iso_oracle(Graph.empty(2), Graph.empty(3))

    def test_iff_min_matrix(self):
        four = list(all_graphs(4))
        for a, b in itertools.product(four[::5], four[::3]):
            assert iso_oracle(a, b) == (brute_force(a).min_matrix == brute_force(b).min_matrix)


def test_enumeration_sizes():
    assert len(list(all_graphs(4))) == 64
    assert len(pair_slots(4, directed=True)) == 12
    assert graph_from_code(3, 0b111) == gen_complete(3)

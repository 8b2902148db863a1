from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttour import fixture, gen_random
from ttour.graph import (
    Caps,
    CapacityError,
    Graph,
    InstanceError,
    InvalidPartitionError,
    all_cuts,
    cut_edges,
    enumerate_spanning_trees,
    fundamental_cut,
    is_spanning_tree,
    min_odd_cut,
    min_spanning_tree,
    odd_degree_vertices,
    partition_cross_edges,
    set_partitions,
    tree_join,
    validate_ttour,
)

F = Fraction
EDGE, TRI, PATH, C4 = (fixture(n) for n in ("FIX-EDGE", "FIX-TRI-TOUR", "FIX-TRI-PATH", "FIX-C4"))
# FIX-TRI-*: e0=01 e1=12 e2=02.  FIX-C4: e0=01 e1=12 e2=23 e3=30.


def test_cut_edges():
    assert cut_edges(EDGE.graph, {0}).edges == {0}
    assert cut_edges(PATH.graph, {1}).edges == {0, 1}
    assert cut_edges(C4.graph, {0, 1}).edges == {1, 3}


def test_cut_sides_are_canonical():
    c = cut_edges(C4.graph, {0, 1})
    assert 0 not in c.side and c == cut_edges(C4.graph, {2, 3})


def test_partition_cross_edges():
    assert partition_cross_edges(C4.graph, [{0}, {1}, {2}, {3}]) == {0, 1, 2, 3}
    assert partition_cross_edges(C4.graph, [{0, 1}, {2, 3}]) == {1, 3}
    assert partition_cross_edges(C4.graph, [{0, 1, 2, 3}]) == frozenset()


def test_partition_must_cover():
    with pytest.raises(InvalidPartitionError):
        partition_cross_edges(C4.graph, [{0, 1}, {2}])


def test_is_spanning_tree():
    assert is_spanning_tree(PATH.graph, {0, 1})
    assert not is_spanning_tree(PATH.graph, {0, 1, 2})
    assert not is_spanning_tree(C4.graph, {0, 2})


def test_odd_degree_vertices():
    star = Graph(4, ((0, 1), (0, 2), (0, 3)))
    assert odd_degree_vertices(PATH.graph, {0, 1}) == {0, 2}
    assert odd_degree_vertices(C4.graph, {0, 1, 2, 3}) == frozenset()
    assert odd_degree_vertices(star, {0, 1, 2}) == {0, 1, 2, 3}


def test_tree_join():
    assert tree_join(PATH.graph, {0, 1}, {0, 2}) == {0, 1}
    assert tree_join(C4.graph, {0, 1, 2}, set()) == frozenset()
    assert tree_join(C4.graph, {0, 1, 2}, {0, 1}) == {0}


def test_fundamental_cut():
    assert fundamental_cut(EDGE.graph, {0}, 0).edges == {0}
    assert fundamental_cut(PATH.graph, {0, 1}, 0).edges == {0, 2}
    assert fundamental_cut(C4.graph, {0, 1, 2}, 1).edges == {1, 3}


def test_validate_ttour():
    assert validate_ttour(PATH, (1, 1, 0))
    assert not validate_ttour(PATH, (0, 0, 2))
    assert validate_ttour(TRI, (1, 1, 1))
    assert not validate_ttour(PATH, (1, 1, 3))


def test_min_odd_cut():
    cut, value = min_odd_cut(PATH.graph, {0, 2}, (F(1), F(1), F(0)))
    assert value == 1 and cut.is_odd({0, 2})
    assert min_odd_cut(EDGE.graph, {0, 1}, (F(1),))[1] == 1
    assert min_odd_cut(C4.graph, {0, 2}, (F(1),) * 4)[1] == 2


def test_min_odd_cut_rejects_empty_t():
    with pytest.raises(ValueError):
        min_odd_cut(C4.graph, set(), (F(1),) * 4)


def test_enumerate_spanning_trees():
    assert len(enumerate_spanning_trees(EDGE.graph)) == 1
    assert len(enumerate_spanning_trees(TRI.graph)) == 3
    assert len(enumerate_spanning_trees(C4.graph)) == 4


def test_capacity_errors():
    big = gen_random(8, 14, 0)
    with pytest.raises(CapacityError):
        enumerate_spanning_trees(big.graph, Caps(tree_enum=10))
    with pytest.raises(CapacityError):
        list(all_cuts(big.graph, Caps(cut_enum=6)))


def test_caps_must_be_positive():
    with pytest.raises(ValueError):
        Caps(matching=0)


def test_graph_validation():
    with pytest.raises(InstanceError):
        Graph(3, ((0, 1),))
    with pytest.raises(InstanceError):
        Graph(2, ((0, 0), (0, 1)))


def test_set_partitions_counts_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]


def test_min_spanning_tree_breaks_ties_by_edge_id():
    assert min_spanning_tree(C4.graph, (F(1),) * 4) == {0, 1, 2}


seeds = st.integers(0, 10**6)


def _instance(seed, n_max=7):
    import random

    r = random.Random(seed)
    n = r.randint(2, n_max)
    m = r.randint(n - 1, min(12, n * (n - 1) // 2))
    return gen_random(n, m, seed, t_size=r.choice([t for t in (0, 2, 4) if t <= n]))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_every_tree_crosses_every_cut(seed):
    g = _instance(seed).graph
    trees = enumerate_spanning_trees(g)
    for cut in all_cuts(g):
        assert all(f & cut.edges for f in trees)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_fundamental_cut_meets_tree_once(seed):
    g = _instance(seed).graph
    f = min_spanning_tree(g, [F(1)] * g.m)
    for e in f:
        assert fundamental_cut(g, f, e).edges & f == {e}


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_tree_join_parity(seed, data):
    inst = _instance(seed)
    g = inst.graph
    f = min_spanning_tree(g, inst.lengths)
    size = data.draw(st.sampled_from(range(0, g.n + 1, 2)))
    t = data.draw(st.sets(st.integers(0, g.n - 1), min_size=size, max_size=size))
    j = tree_join(g, f, t)
    assert j <= f and odd_degree_vertices(g, j) == t

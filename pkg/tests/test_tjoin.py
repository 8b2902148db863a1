import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttour import fixture, gen_random
from ttour.graph import Caps, CapacityError, all_cuts, odd_degree_vertices
from ttour.tjoin import brute_force_tjoin, min_perfect_matching, min_tjoin, qplus_contains, shortest_path_metric

F = Fraction
EDGE, PATH, C4 = (fixture(n) for n in ("FIX-EDGE", "FIX-TRI-PATH", "FIX-C4"))


def test_shortest_path_metric():
    assert shortest_path_metric(PATH).d(0, 2) == 1
    assert shortest_path_metric(C4).d(0, 2) == 2
    assert shortest_path_metric(EDGE).d(0, 1) == 1


def test_metric_paths_realize_distances():
    inst = gen_random(7, 11, 3)
    metric = shortest_path_metric(inst)
    for a in range(7):
        for b in range(7):
            assert inst.cost(metric.path(a, b)) == metric.d(a, b)


def test_min_tjoin_examples():
    r = min_tjoin(PATH, {0, 2})
    assert r.join == {2} and r.length == 1
    assert min_tjoin(C4, set()).length == 0
    assert min_tjoin(C4, {0, 2}).length == 2


def test_min_tjoin_rejects_odd_target():
    with pytest.raises(ValueError):
        min_tjoin(C4, {0})


def test_matching_cap():
    inst = gen_random(8, 12, 1, t_size=8)
    with pytest.raises(CapacityError):
        min_tjoin(inst, range(8), Caps(matching=6))


def test_min_perfect_matching_small():
    w = [[0, 1, 5, 5], [1, 0, 5, 5], [5, 5, 0, 1], [5, 5, 1, 0]]
    assert min_perfect_matching(4, w) == (2, [(0, 1), (2, 3)])


def test_qplus_contains_examples():
    assert qplus_contains(PATH.graph, {0, 2}, (F(1), F(1), F(0))) == (True, None)
    ok, cut = qplus_contains(EDGE.graph, {0, 1}, (F(1, 2),))
    assert not ok and cut.edges == {0}
    assert qplus_contains(C4.graph, set(), (F(0),) * 4) == (True, None)


def _instance(seed):
    r = random.Random(seed)
    n = r.randint(2, 7)
    m = r.randint(n - 1, min(12, n * (n - 1) // 2))
    return gen_random(n, m, seed, weight_range=r.choice([(1, 1), (0, 3), (1, 9)]))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_min_tjoin_matches_subset_enumeration(seed, data):
    inst = _instance(seed)
    n = inst.graph.n
    size = data.draw(st.sampled_from(range(0, n + 1, 2)))
    tp = data.draw(st.sets(st.integers(0, n - 1), min_size=size, max_size=size))
    r = min_tjoin(inst, tp)
    assert odd_degree_vertices(inst.graph, r.join) == tp
    assert r.length == inst.cost(r.join) == brute_force_tjoin(inst, tp)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tjoin_meets_every_tcut_oddly(seed):
    inst = _instance(seed)
    tp = inst.terminals
    j = min_tjoin(inst, tp).join
    for cut in all_cuts(inst.graph):
        if cut.is_odd(tp):
            assert len(j & cut.edges) % 2 == 1

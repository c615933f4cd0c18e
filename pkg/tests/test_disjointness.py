from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from graphjoin.disjointness import (
    Mode,
    bipartite_via_disjointness,
    c_disjoint,
    classify_pair,
    connected_via_disjointness,
    indicator_cost,
    persistence_experiment,
    skeleton_of,
    strong_disjoint,
    strong_via_tree_characterization,
    weak_disjoint,
    weak_disjoint_rank,
    weak_disjoint_spectral,
)
from graphjoin.errors import CharacterizationInapplicable, NotFullySupported, RequiresConnected
from graphjoin.graph import Graph, make_complete_bipartite, make_cycle, make_path, make_two_loop
from graphjoin.joining import product_cost, validate_joining

from corpus import random_disconnected, small_corpus, weighted_triangle

C = make_cycle
P = make_path


def parity_cost(g: Graph, h: Graph) -> dict:
    return {(u, v): F((u + v) % 2) for u in range(g.n) for v in range(h.n)}


def test_strong_examples():
    ok, trace = strong_disjoint(C(3), P(2, "v"))
    assert ok and trace.numbers["null_dim"] == 1 and trace.witness is None
    ok, trace = strong_disjoint(C(9), P(4, "v"))
    assert not ok
    assert trace.witness is not None and validate_joining(trace.witness).valid


@pytest.mark.parametrize("m", range(3, 8))
@pytest.mark.parametrize("n", range(3, 8))
def test_cycles_never_strong(m, n):
    ok, trace = strong_disjoint(C(m), C(n, "v"))
    assert not ok
    w = trace.witness
    assert validate_joining(w).valid and w.entries != {}


def test_weak_rank_examples():
    assert weak_disjoint_rank(C(3), C(4, "v"))[0]
    ok, trace = weak_disjoint_rank(C(3), C(6, "v"))
    assert not ok
    w = trace.witness
    assert validate_joining(w).valid
    assert any(w.degree[(u, v)] != F(1, 18) for u in range(3) for v in range(6))
    assert not weak_disjoint_rank(P(2), make_complete_bipartite(2, 2))[0]


def test_weak_spectral_examples():
    ok, trace = weak_disjoint_spectral(C(3), C(4, "v"))
    assert ok and trace.as_dict()["gcd"] == "x - 1"
    assert not weak_disjoint_spectral(P(3), C(4, "v"))[0]
    for g in (C(5), P(4), weighted_triangle()):
        assert not weak_disjoint_spectral(g, g)[0]
    with pytest.raises(NotFullySupported):
        weak_disjoint_spectral(Graph.from_edges(["a", "b", "c"], [("a", "b", 1)]), P(2))


def test_weak_default_falls_back_to_rank_for_zero_degree():
    g = Graph.from_edges(["a", "b", "c"], [("a", "b", 1)])
    ok, trace = weak_disjoint(g, C(3, "v"))
    assert trace.procedure == "weak_rank"
    assert ok == weak_disjoint_rank(g, C(3, "v"))[0]


def test_c_disjoint_examples():
    g, h = P(2), make_complete_bipartite(2, 2)
    assert c_disjoint(g, h, parity_cost(g, h))[0]
    assert not c_disjoint(g, h, indicator_cost(0, 1))[0]
    assert c_disjoint(g, h, {})[0]


def test_p2_k22_pair_some_indicator_separates():
    g, h = P(2), make_complete_bipartite(2, 2)
    results = [c_disjoint(g, h, indicator_cost(u, v))[0] for u in range(g.n) for v in range(h.n)]
    assert not all(results)


def test_tree_characterization():
    assert strong_via_tree_characterization(C(3), P(2, "v"))[0]
    assert not strong_via_tree_characterization(C(3), C(4, "v"))[0]
    assert not strong_via_tree_characterization(P(3), P(5, "v"))[0]
    with pytest.raises(CharacterizationInapplicable):
        strong_via_tree_characterization(make_two_loop(F(1, 2)), P(2))


@pytest.mark.parametrize(
    "g, h, strong, weak",
    [(C(3), C(4, "v"), False, True), (C(3), P(2, "v"), True, True), (C(4), P(3, "v"), False, False)],
    ids=["C3-C4", "C3-P2", "C4-P3"],
)
def test_classify_pair(g, h, strong, weak):
    v = classify_pair(g, h)
    assert (v.strong, v.weak) == (strong, weak)
    assert {t.procedure for t in v.method_trace} >= {"strong_rank", "weak_rank", "weak_spectral"}


def test_classify_p2_k22_pair_with_parity():
    g, h = P(2), make_complete_bipartite(2, 2)
    v = classify_pair(g, h, {"parity": parity_cost(g, h)})
    assert not v.strong and not v.weak and v.c_disjoint == {"parity": True}
    assert validate_joining(v.witnesses["weak"]).valid


@pytest.mark.parametrize("g", [x for x in small_corpus() if x.n <= 3], ids=lambda g: g.name)
@pytest.mark.parametrize("h", [x for x in small_corpus() if x.n <= 3], ids=lambda g: g.name)
def test_implication_chain(g, h):
    rng = random.Random(hash((g.name, h.name)) & 0xFFFF)
    v = classify_pair(g, h)
    assert v.weak or not v.strong
    for _ in range(5):
        cost = {(u, w): F(rng.randint(0, 5)) for u in range(g.n) for w in range(h.n)}
        ok = c_disjoint(g, h, cost)[0]
        if v.weak:
            assert ok


def test_non_weak_pair_has_separating_cost():
    g, h = C(3), C(6, "v")
    rng = random.Random(3)
    costs = [{(u, w): F(rng.randint(0, 5)) for u in range(g.n) for w in range(h.n)} for _ in range(50)]
    assert not all(c_disjoint(g, h, c)[0] for c in costs)


@pytest.mark.parametrize("seed", range(6))
def test_disconnected_pairs_never_weak(seed):
    rng = random.Random(seed)
    g = random_disconnected(rng, [2, rng.randint(2, 3)])
    h = random_disconnected(rng, [2, 2], name="E")
    assert not weak_disjoint(g, h)[0]
    assert not weak_disjoint_rank(g, h)[0]


def test_bipartite_examples():
    assert bipartite_via_disjointness(C(4))
    assert not bipartite_via_disjointness(C(3))
    assert bipartite_via_disjointness(P(5))
    with pytest.raises(RequiresConnected):
        bipartite_via_disjointness(make_two_loop(F(1, 2)))


def test_connectivity_examples():
    assert connected_via_disjointness(C(5), (F(1, 2), F(1, 2)))
    two_triangles = Graph.from_edges(
        list("abcdef"), [("a", "b", 1), ("b", "c", 1), ("a", "c", 1), ("d", "e", 1), ("e", "f", 1), ("d", "f", 1)]
    )
    assert not connected_via_disjointness(two_triangles, (F(1, 3), F(2, 3)))
    for g in [x for x in small_corpus() if all(d > 0 for d in x.degree)]:
        assert connected_via_disjointness(g, (F(1, 2), F(1, 2))) == connected_via_disjointness(g, (F(1, 4), F(3, 4)))


def test_persistence_triangles():
    tri = skeleton_of(C(3))
    rep = persistence_experiment(tri, tri, 100, seed=11, mode=Mode.WEAK)
    assert rep.verdict == "DICHOTOMY-2" and rep.fraction >= F(9, 10)
    assert weak_disjoint(C(3), weighted_triangle())[0]


def test_persistence_trees_zero():
    rep = persistence_experiment(skeleton_of(P(3)), skeleton_of(P(4)), 20, seed=1)
    assert rep.verdict == "DICHOTOMY-1" and rep.fraction == 0


def test_persistence_deterministic():
    tri = skeleton_of(C(3))
    a = persistence_experiment(tri, skeleton_of(P(3)), 15, seed=5, mode="strong")
    b = persistence_experiment(tri, skeleton_of(P(3)), 15, seed=5, mode="strong")
    assert a == b


def test_product_cost_is_upper_value():
    g, h = P(2), make_complete_bipartite(2, 2)
    assert product_cost(g, h, parity_cost(g, h)) == F(1, 2)

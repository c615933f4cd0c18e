from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from graphjoin.errors import DuplicateEdge, EmptyGraph, InvalidSize, InvalidWeight, NotFullySupported, UnknownVertex
from graphjoin.graph import (
    Graph,
    connected_components,
    has_self_loops,
    is_bipartite_structural,
    is_connected,
    is_forest,
    is_fully_supported,
    isomorphism,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_single_loop,
    make_two_loop,
    parse_graph,
    tensor_product,
    transition_matrix,
)

from corpus import small_corpus


TRIANGLE = """\
graph tri
vertex a b c
edge a b 1
edge b c 1
edge a c 1
"""


def test_parse_triangle_normalizes_to_one_sixth():
    g = parse_graph(TRIANGLE)
    assert g.name == "tri"
    assert len(g.weights) == 6
    assert set(g.weights.values()) == {F(1, 6)}
    assert g.raw_total == 6


def test_parse_path_edge():
    g = parse_graph("vertex a b\nedge a b 1\n")
    assert g.weight("a", "b") == g.weight("b", "a") == F(1, 2)


def test_parse_duplicate_edge_reports_line():
    with pytest.raises(DuplicateEdge) as err:
        parse_graph("vertex a b\nedge a b 1\nedge b a 2\n")
    assert err.value.line == 3


@pytest.mark.parametrize(
    "text, exc",
    [
        ("vertex a\nedge a b 1\n", UnknownVertex),
        ("vertex a b\nedge a b -1\n", InvalidWeight),
        ("vertex a b\nedge a b x\n", InvalidWeight),
        ("vertex a b\n", EmptyGraph),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_graph(text)


def test_loop_value_counted_once():
    g = parse_graph("vertex a b\nedge a b 1\nloop b 2\n")
    assert g.weight("b", "b") == F(1, 2)
    assert g.weight("a", "b") == F(1, 4)
    assert g.degree == (F(1, 4), F(3, 4))


def test_json_round_trip_and_text_round_trip():
    g = make_complete_bipartite(2, 3)
    assert parse_graph(json.dumps(g.to_json())) == g
    assert parse_graph(g.to_text()) == g


def test_family_degrees():
    assert make_cycle(3).degree == (F(1, 3),) * 3
    assert make_path(2).degree == (F(1, 2),) * 2
    k22 = make_complete_bipartite(2, 2)
    assert len(k22.weights) == 8 and set(k22.weights.values()) == {F(1, 8)}
    assert make_cycle(4).degree == (F(1, 4),) * 4
    assert make_path(3).degree == (F(1, 4), F(1, 2), F(1, 4))
    assert make_single_loop().degree == (F(1),)


@pytest.mark.parametrize("k", range(3, 10))
def test_uniform_family_shapes(k):
    assert set(make_cycle(k).degree) == {F(1, k)}
    p = make_path(k).degree
    assert all(x == 2 * p[0] for x in p[1:-1]) and p[0] == p[-1]


def test_family_size_errors():
    with pytest.raises(InvalidSize):
        make_cycle(2)
    with pytest.raises(InvalidSize):
        make_path(1)
    with pytest.raises(InvalidSize):
        make_complete_bipartite(0, 2)


def test_labels_sort_numerically_with_padding():
    g = make_cycle(12)
    assert g.labels[:3] == ("u00", "u01", "u02")
    assert g.alpha(g.index("u11"), g.index("u00")) == F(1, 24)


def test_tensor_product_c3_p2():
    k = tensor_product(make_cycle(3), make_path(2, "v"))
    assert k.n == 6
    assert len(k.weights) == 12 and set(k.weights.values()) == {F(1, 12)}


def test_tensor_with_single_loop_is_copy():
    g = make_cycle(5)
    k = tensor_product(g, make_single_loop())
    assert isomorphism(k, g) is not None


@pytest.mark.parametrize("g", small_corpus(), ids=lambda g: g.name)
@pytest.mark.parametrize("h", [make_path(2, "v"), make_cycle(3, "v"), make_two_loop(F(1, 3), "v")], ids=lambda g: g.name)
def test_tensor_degree_is_product(g, h):
    k = tensor_product(g, h)
    for u in range(g.n):
        for v in range(h.n):
            lab = f"{g.labels[u]},{h.labels[v]}"
            assert k.degree[k.index(lab)] == g.degree[u] * h.degree[v]


def test_transition_matrices():
    c3 = transition_matrix(make_cycle(3))
    assert all(c3[i, i] == 0 for i in range(3))
    assert all(c3[i, j] == F(1, 2) for i in range(3) for j in range(3) if i != j)
    assert transition_matrix(make_path(2)).data == [[0, 1], [1, 0]]
    with pytest.raises(NotFullySupported):
        transition_matrix(Graph.from_edges(["a", "b", "c"], [("a", "b", 1)]))


@pytest.mark.parametrize("g", [x for x in small_corpus() if is_fully_supported(x)], ids=lambda g: g.name)
def test_transition_rows_sum_to_one(g):
    P = transition_matrix(g)
    assert all(sum(row) == 1 for row in P.data)


def test_predicates():
    c4, p5 = make_cycle(4), make_path(5)
    assert is_connected(c4) and not is_forest(c4) and is_bipartite_structural(c4)
    assert is_connected(p5) and is_forest(p5) and is_bipartite_structural(p5)
    loops = make_two_loop(F(1, 2))
    assert not is_connected(loops) and len(connected_components(loops)) == 2 and is_fully_supported(loops)
    assert has_self_loops(loops) and not is_forest(loops)
    assert not is_bipartite_structural(make_cycle(5))
    assert not is_fully_supported(Graph.from_edges(["a", "b", "c"], [("a", "b", 1)]))


def test_asymmetric_weights_rejected():
    with pytest.raises(InvalidWeight):
        Graph(["a", "b"], {(0, 1): F(1)})
    with pytest.raises(InvalidWeight):
        Graph(["a", "b"], {(0, 1): F(1, 4), (1, 0): F(1, 4)})


def test_isomorphism_relabelled_cycle():
    g = make_cycle(6)
    h = g.relabel({lab: f"z{5 - i}" for i, lab in enumerate(g.labels)})
    iso = isomorphism(g, h)
    assert iso is not None
    assert all(g.alpha(i, j) == h.alpha(iso[i], iso[j]) for i in range(6) for j in range(6))
    assert isomorphism(make_cycle(6), make_path(6)) is None

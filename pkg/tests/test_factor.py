from __future__ import annotations

from fractions import Fraction as F

import pytest

from graphjoin.disjointness import weak_disjoint
from graphjoin.errors import CompositionMismatch, RequiresConnected, SearchBudgetExceeded
from graphjoin.factor import (
    FactorMap,
    Inconsistent,
    common_factor_search,
    compose_factors,
    find_factor_maps,
    is_nontrivial,
    make_factor_map,
    mutual_factor_isomorphism,
    parse_factor_map,
    projection_factors,
    projection_maps,
    quotient_graph,
    restricted_growth_strings,
    verify_factor,
    verify_factor_connected,
)
from graphjoin.graph import Graph, isomorphism, make_cycle, make_path, make_two_loop, transition_matrix
from graphjoin.joining import WeightJoining, diagonal_cycle_joining, product_joining, validate_joining
from graphjoin.linalg import char_poly, poly_divmod

from corpus import looped_left, looped_right, small_corpus

C = make_cycle


def mod_map(big: int, r: int) -> tuple[int, ...]:
    return tuple(i % r for i in range(big))


def test_mod_three_and_parity():
    assert verify_factor(C(6), C(3, "s"), mod_map(6, 3))[0]
    assert verify_factor(C(4), make_path(2, "s"), mod_map(4, 2))[0]


def test_non_surjective_reports_surjectivity():
    ok, bad = verify_factor(C(6), C(3, "s"), (0,) * 6)
    assert not ok and bad[0][0] == "surjectivity"


def test_connected_checker_agrees():
    g, h = C(6), C(3, "s")
    assert verify_factor_connected(g, h, mod_map(6, 3))[0]
    corrupt = (0, 1, 2, 0, 2, 1)
    assert not verify_factor(g, h, corrupt)[0] and not verify_factor_connected(g, h, corrupt)[0]
    with pytest.raises(RequiresConnected):
        verify_factor_connected(make_path(2), make_two_loop(F(1, 2)), (0, 1))


@pytest.mark.parametrize("g", small_corpus(), ids=lambda g: g.name)
def test_connected_checker_sweep(g):
    h = make_path(2, "s")
    if g.n < 2:
        return
    for code in range(2 ** g.n):
        phi = tuple((code >> i) & 1 for i in range(g.n))
        assert verify_factor(g, h, phi)[0] == verify_factor_connected(g, h, phi)[0]


def test_projection_factors():
    for k in (product_joining(C(3), C(4, "v")), diagonal_cycle_joining(3, 4)):
        f1, f2 = projection_factors(k)
        assert f1.verified and f2.verified


def test_projection_converse_on_corrupted_candidate():
    k = diagonal_cycle_joining(3, 4)
    entries = dict(k.entries)
    # shift mass between two symmetric pairs: stays symmetric and normalized
    (a, b), (c, d) = sorted(k.entries)[0], sorted(k.entries)[-1]
    entries[(a, b)] += F(1, 48)
    entries[(b, a)] += F(1, 48)
    entries[(c, d)] -= F(1, 48)
    entries[(d, c)] -= F(1, 48)
    bad = WeightJoining(k.left, k.right, entries)
    f1, f2 = projection_maps(bad)
    assert validate_joining(bad).valid == (f1.verified and f2.verified)


def test_compose():
    f1 = make_factor_map(C(6), C(3, "s"), mod_map(6, 3))
    f2 = make_factor_map(C(12, "t"), C(6), mod_map(12, 6))
    comp = compose_factors(f1, f2)
    assert comp.verified and comp.map == mod_map(12, 3)
    ident = make_factor_map(C(6), C(6), tuple(range(6)))
    assert compose_factors(f1, ident).map == f1.map
    with pytest.raises(CompositionMismatch):
        compose_factors(f1, f1)


def test_find_factor_maps():
    maps = find_factor_maps(C(6), C(3, "s"))
    assert maps and FactorMap(C(6), C(3, "s"), mod_map(6, 3), True) in maps
    assert find_factor_maps(looped_left(), looped_right()) == []
    g = make_path(4)
    assert any(f.map == tuple(range(4)) for f in find_factor_maps(g, g))
    with pytest.raises(SearchBudgetExceeded):
        find_factor_maps(C(8), C(4, "s"), budget=100)


def test_mutual_isomorphism():
    g = C(4)
    h = g.relabel({lab: "z" + lab for lab in g.labels})
    assert mutual_factor_isomorphism(g, h) is not None
    assert mutual_factor_isomorphism(C(3), C(4)) is None
    assert mutual_factor_isomorphism(C(6), C(3)) is None


def test_quotients():
    q = quotient_graph(C(6), [[0, 3], [1, 4], [2, 5]])
    assert isomorphism(q, C(3)) is not None
    q = quotient_graph(C(4), [[0, 2], [1, 3]])
    assert isomorphism(q, make_path(2)) is not None
    for rgs in restricted_growth_strings(5, 2):
        if max(rgs) == 1:
            cells = [[i for i in range(5) if rgs[i] == c] for c in (0, 1)]
            res = quotient_graph(C(5), cells)
            assert isinstance(res, Inconsistent) and not res


def test_restricted_growth_counts():
    # Bell numbers
    assert [sum(1 for _ in restricted_growth_strings(n, n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]


def test_common_factor_search_examples():
    found = common_factor_search(C(6), C(9, "v"), 4)
    assert any(isomorphism(k, C(3)) is not None for k, _, _ in found)
    assert common_factor_search(C(3), C(4, "v"), 4) == []
    assert common_factor_search(looped_left(), looped_right(), 3) == []
    assert not weak_disjoint(looped_left(), looped_right())[0]


def test_common_factor_looped_path_for_c9_p4():
    # gcd(9, 3) = 3: expected factor is a 2-vertex looped path with eta = 1/3 on the edge
    found = common_factor_search(C(9), make_path(4, "v"), 4)
    eta = Graph.from_edges(["s0", "s1"], [("s0", "s1", F(1, 3))], [("s1", F(1, 3))])
    assert any(isomorphism(k, eta) is not None for k, _, _ in found)
    for k, fg, fh in found:
        assert is_nontrivial(k) and fg.verified and fh.verified


@pytest.mark.parametrize("g, h", [(C(6), C(3, "s")), (C(4), make_path(2, "s")), (C(8), C(4, "s"))])
def test_spectral_inclusion(g, h):
    maps = find_factor_maps(g, h)
    assert maps
    for f in maps:
        _, rem = poly_divmod(char_poly(transition_matrix(g)), char_poly(transition_matrix(h)))
        assert rem.is_zero()


def test_parse_factor_map():
    f = parse_factor_map("factor u0 -> s0\nfactor u1 -> s1\nfactor u2 -> s0\nfactor u3 -> s1\n",
                         C(4), make_path(2, "s"))
    assert make_factor_map(f.source, f.target, f.map).verified
    assert parse_factor_map(f.to_text(), C(4), make_path(2, "s")).map == f.map

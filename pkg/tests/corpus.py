"""Shared test graphs, joinings and random generators."""
from __future__ import annotations

import random
from fractions import Fraction as F

from graphjoin.graph import (
    Graph,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_single_loop,
    make_two_loop,
)
from graphjoin.joining import WeightJoining


def looped_left() -> Graph:
    return Graph.from_edges(
        ["g1", "g2", "g3"],
        [("g1", "g2", F(1, 6)), ("g2", "g3", F(1, 6))],
        [("g2", F(1, 6)), ("g3", F(1, 6))],
        name="looped_G",
    )


def looped_right() -> Graph:
    return Graph.from_edges(["h1", "h2"], [("h1", "h2", F(1, 3))], [("h2", F(1, 3))], name="looped_H")


ZERO_DEGREE_JOINING = """\
joining zero_degree_K
jedge g1 h1 g2 h2 1/6
jedge g2 h2 g3 h1 1/12
jedge g3 h1 g3 h2 1/12
jedge g3 h2 g2 h2 1/12
jedge g2 h2 g2 h2 1/6
"""


def zero_degree_joining() -> WeightJoining:
    from graphjoin.joining import parse_joining

    return parse_joining(ZERO_DEGREE_JOINING, looped_left(), looped_right())


def weighted_triangle(a=1, b=1, c=2, name="tri112") -> Graph:
    return Graph.from_edges(["a", "b", "c"], [("a", "b", F(a)), ("b", "c", F(b)), ("a", "c", F(c))], name=name)


def triangle_with_pendant() -> Graph:
    return Graph.from_edges(
        ["u0", "u1", "u2", "u3"], [("u0", "u1", 1), ("u1", "u2", 1), ("u0", "u2", 1), ("u2", "u3", 1)], name="C3+pendant"
    )


def small_corpus() -> list[Graph]:
    """Graphs with few directed edges, used for pair sweeps."""
    gs = [
        make_path(2),
        make_path(3),
        make_path(4),
        make_cycle(3),
        make_cycle(4),
        make_complete_bipartite(1, 3),
        make_two_loop(F(1, 2)),
        make_two_loop(F(1, 3)),
        make_single_loop(),
        Graph.from_edges(["a", "b"], [("a", "b", 1)], [("b", 1)], name="P2+loop"),
        weighted_triangle(),
        Graph.from_edges(["a", "b", "c", "d"], [("a", "b", 1), ("c", "d", 2)], name="2P2"),
        Graph.from_edges(["a", "b", "c"], [("a", "b", 1)], name="P2+isolated"),
        Graph.from_edges(["a", "b", "c"], [("a", "b", 1), ("b", "c", 3)], name="P3w"),
        looped_left(),
        looped_right(),
    ]
    return gs


def joining_variables(g: Graph, h: Graph) -> int:
    return len(g.edges) * len(h.edges)


def random_connected(rng: random.Random, n: int, extra: int = 0, loops: bool = False, weighted: bool = True,
                     name: str = "R") -> Graph:
    """Random spanning tree plus ``extra`` chords, small integer weights."""
    labels = [f"x{i}" for i in range(n)]
    edges: dict[tuple[str, str], F] = {}
    for i in range(1, n):
        j = rng.randrange(i)
        edges[(labels[j], labels[i])] = F(rng.randint(1, 4) if weighted else 1)
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if (labels[i], labels[j]) not in edges]
    rng.shuffle(pairs)
    for pair in pairs[:extra]:
        edges[pair] = F(rng.randint(1, 4) if weighted else 1)
    lp = {}
    if loops:
        lp[labels[rng.randrange(n)]] = F(rng.randint(1, 4))
    return Graph.from_edges(labels, edges, lp, name=name)


def random_disconnected(rng: random.Random, sizes: list[int], name: str = "D") -> Graph:
    """Disjoint union of random connected pieces, each with at least one edge."""
    labels, edges = [], {}
    base = 0
    for size in sizes:
        piece = random_connected(rng, size, extra=rng.randint(0, 1))
        for (i, j), w in piece.weights.items():
            if i < j:
                edges[(f"y{base + i}", f"y{base + j}")] = w * piece.raw_total
        labels += [f"y{base + i}" for i in range(size)]
        base += size
    return Graph.from_edges(labels, edges, name=name)

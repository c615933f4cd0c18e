"""Weighted undirected graphs as normalized symmetric weight functions.

A graph is a sorted tuple of vertex labels plus a sparse map from ordered
index pairs to positive rationals.  The map is symmetric and sums to one
over ordered pairs, with a loop ``(i, i)`` counted once.
"""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DuplicateEdge,
    EmptyGraph,
    InvalidSize,
    InvalidWeight,
    NotFullySupported,
    ParseError,
    UnknownVertex,
)
from .linalg import ONE, ZERO, RMatrix

Pair = tuple[int, int]


def parse_rational(text: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidWeight(f"not a rational number: {text!r}", line) from None


class Graph:
    """Finite vertex set with a normalized symmetric weight function."""

    def __init__(
        self,
        labels: Iterable[str],
        weights: Mapping[Pair, Fraction],
        name: str = "",
        raw_total: Fraction = ONE,
    ) -> None:
        self.labels = tuple(labels)
        if list(self.labels) != sorted(set(self.labels)):
            raise ValueError("vertex labels must be unique and sorted")
        n = len(self.labels)
        clean: dict[Pair, Fraction] = {}
        for (i, j), w in weights.items():
            w = Fraction(w)
            if not (0 <= i < n and 0 <= j < n):
                raise UnknownVertex(f"vertex index out of range in pair {(i, j)}")
            if w < 0:
                raise InvalidWeight(f"negative weight at {(i, j)}")
            if w:
                clean[(i, j)] = w
        for (i, j), w in clean.items():
            if clean.get((j, i)) != w:
                raise InvalidWeight(f"weight function not symmetric at {(self.labels[i], self.labels[j])}")
        if sum(clean.values(), ZERO) != 1:
            raise InvalidWeight("weight function does not sum to 1")
        self.weights = dict(sorted(clean.items()))
        self.name = name
        self.raw_total = Fraction(raw_total)
        self._index = {lab: k for k, lab in enumerate(self.labels)}

    @classmethod
    def from_edges(
        cls,
        labels: Iterable[str],
        edges: Mapping[tuple[str, str], Fraction] | Iterable[tuple[str, str, Fraction]] = (),
        loops: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]] = (),
        name: str = "",
    ) -> Graph:
        """Build from undirected edge values and loop values, normalizing the total."""
        labels = sorted(set(labels))
        index = {lab: k for k, lab in enumerate(labels)}
        if isinstance(edges, Mapping):
            edges = [(u, v, w) for (u, v), w in edges.items()]
        if isinstance(loops, Mapping):
            loops = list(loops.items())
        raw: dict[Pair, Fraction] = {}
        for u, v, w in edges:
            i, j = index[u], index[v]
            raw[(i, j)] = raw.get((i, j), ZERO) + Fraction(w)
            raw[(j, i)] = raw.get((j, i), ZERO) + Fraction(w)
        for u, w in loops:
            i = index[u]
            raw[(i, i)] = raw.get((i, i), ZERO) + Fraction(w)
        total = sum(raw.values(), ZERO)
        if total <= 0:
            raise EmptyGraph("graph has no positive weight")
        return cls(labels, {k: w / total for k, w in raw.items()}, name=name, raw_total=total)

    # -- basic accessors ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {label!r}") from None

    def alpha(self, i: int, j: int) -> Fraction:
        return self.weights.get((i, j), ZERO)

    def weight(self, u: str, v: str) -> Fraction:
        return self.alpha(self.index(u), self.index(v))

    @cached_property
    def degree(self) -> tuple[Fraction, ...]:
        deg = [ZERO] * self.n
        for (i, _), w in self.weights.items():
            deg[i] += w
        return tuple(deg)

    @cached_property
    def edges(self) -> tuple[Pair, ...]:
        """Ordered pairs in the support, lexicographic."""
        return tuple(self.weights)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.weights:
            nb[i].append(j)
        return tuple(tuple(x) for x in nb)

    @cached_property
    def undirected_edges(self) -> tuple[Pair, ...]:
        return tuple((i, j) for i, j in self.weights if i <= j)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.labels == other.labels and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((self.labels, tuple(self.weights.items())))

    def __repr__(self) -> str:
        return f"Graph({self.name or '?'}: {self.n} vertices, {len(self.undirected_edges)} edges)"

    def relabel(self, mapping: Mapping[str, str], name: str | None = None) -> Graph:
        """Copy with vertex labels renamed; order is recomputed from the new labels."""
        return Graph.from_edges(
            [mapping[lab] for lab in self.labels],
            [(mapping[self.labels[i]], mapping[self.labels[j]], w) for (i, j), w in self.weights.items() if i < j],
            [(mapping[self.labels[i]], w) for (i, j), w in self.weights.items() if i == j],
            name=self.name if name is None else name,
        )

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"graph {self.name or 'G'}", "vertex " + " ".join(self.labels)]
        for (i, j), w in self.weights.items():
            if i < j:
                lines.append(f"edge {self.labels[i]} {self.labels[j]} {w}")
            elif i == j:
                lines.append(f"loop {self.labels[i]} {w}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.labels),
            "edges": [[self.labels[i], self.labels[j], str(w)] for (i, j), w in self.weights.items() if i < j],
            "loops": [[self.labels[i], str(w)] for (i, j), w in self.weights.items() if i == j],
        }


# -- parsing ------------------------------------------------------------------

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_graph(source: str) -> Graph:
    """Parse the line format or its JSON mirror."""
    if source.lstrip().startswith("{"):
        return _parse_graph_json(source)
    name = ""
    labels: list[str] = []
    seen_labels: set[str] = set()
    edges: list[tuple[str, str, Fraction, int]] = []
    loops: list[tuple[str, Fraction, int]] = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head, *rest = line.split()
        if head == "graph":
            name = " ".join(rest)
        elif head == "vertex":
            for lab in rest:
                if lab in seen_labels:
                    raise ParseError(f"vertex {lab!r} declared twice", lineno)
                seen_labels.add(lab)
                labels.append(lab)
        elif head == "edge":
            if len(rest) != 3:
                raise ParseError("edge needs two labels and a weight", lineno)
            edges.append((rest[0], rest[1], parse_rational(rest[2], lineno), lineno))
        elif head == "loop":
            if len(rest) != 2:
                raise ParseError("loop needs a label and a weight", lineno)
            loops.append((rest[0], parse_rational(rest[1], lineno), lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    return _assemble(name, labels, edges, loops)


def _parse_graph_json(source: str) -> Graph:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", exc.lineno) from None
    labels = [str(x) for x in doc.get("vertices", [])]
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate vertex in JSON vertex list")
    edges = [(str(u), str(v), parse_rational(str(w)), None) for u, v, w in doc.get("edges", [])]
    loops = [(str(u), parse_rational(str(w)), None) for u, w in doc.get("loops", [])]
    return _assemble(str(doc.get("name", "")), labels, edges, loops)


def _assemble(name, labels, edges, loops) -> Graph:
    known = set(labels)
    seen: set[frozenset] = set()
    for u, v, w, lineno in edges:
        for lab in (u, v):
            if lab not in known:
                raise UnknownVertex(f"unknown vertex {lab!r}", lineno)
        if u == v:
            raise ParseError("use a loop line for self-loops", lineno)
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {u} {v} listed twice", lineno)
        seen.add(key)
        if w <= 0:
            raise InvalidWeight(f"edge weight must be positive, got {w}", lineno)
    for u, w, lineno in loops:
        if u not in known:
            raise UnknownVertex(f"unknown vertex {u!r}", lineno)
        key = frozenset((u,))
        if key in seen:
            raise DuplicateEdge(f"loop at {u} listed twice", lineno)
        seen.add(key)
        if w <= 0:
            raise InvalidWeight(f"loop weight must be positive, got {w}", lineno)
    if not edges and not loops:
        raise EmptyGraph("graph lists no edges or loops")
    return Graph.from_edges(
        labels, [(u, v, w) for u, v, w, _ in edges], [(u, w) for u, w, _ in loops], name=name
    )


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# -- families -------------------------------------------------------------------

def _labels(prefix: str, count: int) -> list[str]:
    width = len(str(count - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def make_cycle(k: int, prefix: str = "u") -> Graph:
    if k < 3:
        raise InvalidSize(f"a cycle needs at least 3 vertices, got {k}")
    labs = _labels(prefix, k)
    return Graph.from_edges(labs, [(labs[i], labs[(i + 1) % k], ONE) for i in range(k)], name=f"C{k}")


def make_path(k: int, prefix: str = "u") -> Graph:
    if k < 2:
        raise InvalidSize(f"a path needs at least 2 vertices, got {k}")
    labs = _labels(prefix, k)
    return Graph.from_edges(labs, [(labs[i], labs[i + 1], ONE) for i in range(k - 1)], name=f"P{k}")


def make_complete_bipartite(k: int, l: int, prefix: str = "v") -> Graph:
    """Parts are the first ``k`` and the last ``l`` labels."""
    if k < 1 or l < 1:
        raise InvalidSize(f"both parts need at least one vertex, got {k} and {l}")
    labs = _labels(prefix, k + l)
    edges = [(labs[i], labs[k + j], ONE) for i in range(k) for j in range(l)]
    return Graph.from_edges(labs, edges, name=f"K{k},{l}")


def make_two_loop(a: Fraction, prefix: str = "w") -> Graph:
    """Two vertices, no edge between them, loop masses ``a`` and ``1 - a``."""
    a = Fraction(a)
    if not 0 < a < 1:
        raise InvalidWeight(f"loop masses must be positive, got {a} and {1 - a}")
    labs = _labels(prefix, 2)
    return Graph.from_edges(labs, loops=[(labs[0], a), (labs[1], 1 - a)], name=f"loops({a})")


def make_single_loop(label: str = "o") -> Graph:
    return Graph.from_edges([label], loops=[(label, ONE)], name="loop")


# -- operations ---------------------------------------------------------------

def degree(g: Graph) -> tuple[Fraction, ...]:
    return g.degree


def product_label(u: str, v: str) -> str:
    return f"{u},{v}"


def tensor_product(g: Graph, h: Graph) -> Graph:
    labels = [product_label(u, v) for u in g.labels for v in h.labels]
    m = h.n
    weights = {
        (i * m + j, k * m + l): a * b
        for (i, k), a in g.weights.items()
        for (j, l), b in h.weights.items()
    }
    # ',' sorts before alphanumerics, so the product order is lexicographic
    if labels != sorted(labels):
        order = sorted(range(len(labels)), key=labels.__getitem__)
        pos = {old: new for new, old in enumerate(order)}
        labels = [labels[i] for i in order]
        weights = {(pos[a], pos[b]): w for (a, b), w in weights.items()}
    return Graph(labels, weights, name=f"{g.name}x{h.name}")


def transition_matrix(g: Graph) -> RMatrix:
    if not is_fully_supported(g):
        raise NotFullySupported(f"graph {g.name or ''} has a vertex of degree zero")
    p = g.degree
    out = RMatrix.zeros(g.n, g.n)
    for (i, j), w in g.weights.items():
        out.data[i][j] = w / p[i]
    return out


# -- predicates -------------------------------------------------------------------

def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in g.neighbors[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) == 1


def is_fully_supported(g: Graph) -> bool:
    return all(d > 0 for d in g.degree)


def has_self_loops(g: Graph) -> bool:
    return any(i == j for i, j in g.weights)


def is_forest(g: Graph) -> bool:
    """No undirected cycle; a loop counts as a cycle."""
    if has_self_loops(g):
        return False
    return len(g.undirected_edges) == g.n - len(connected_components(g))


def is_bipartite_structural(g: Graph) -> bool:
    color: dict[int, int] = {}
    for s in range(g.n):
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def is_uniform(g: Graph) -> bool:
    return len(set(g.weights.values())) <= 1


def isomorphism(g: Graph, h: Graph) -> dict[int, int] | None:
    """A weight-preserving vertex bijection, found by backtracking."""
    if g.n != h.n or sorted(g.weights.values()) != sorted(h.weights.values()):
        return None
    if sorted(g.degree) != sorted(h.degree):
        return None

    def signature(x: Graph, i: int) -> tuple:
        return (x.degree[i], x.alpha(i, i), tuple(sorted(x.alpha(i, j) for j in x.neighbors[i])))

    sg = [signature(g, i) for i in range(g.n)]
    sh = [signature(h, i) for i in range(h.n)]
    order = sorted(range(g.n), key=lambda i: -len(g.neighbors[i]))
    phi: dict[int, int] = {}
    used: set[int] = set()

    def extend(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for j in range(h.n):
            if j in used or sh[j] != sg[i]:
                continue
            if all(g.alpha(i, k) == h.alpha(j, phi[k]) for k in phi):
                phi[i] = j
                used.add(j)
                if extend(pos + 1):
                    return True
                del phi[i]
                used.discard(j)
        return False

    return dict(phi) if extend(0) else None

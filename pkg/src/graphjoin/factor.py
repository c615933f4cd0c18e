"""Graph factors: verification, search, quotients and common factors."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .errors import (
    CompositionMismatch,
    InternalInconsistency,
    InvalidJoining,
    ParseError,
    RequiresConnected,
    SearchBudgetExceeded,
    UnknownVertex,
)
from .graph import Graph, is_connected, isomorphism
from .joining import WeightJoining, validate_joining
from .linalg import ZERO

DEFAULT_MAP_BUDGET = 10**7
DEFAULT_PARTITION_BUDGET = 10**6


def map_budget() -> int:
    return int(os.environ.get("GRAPHJOIN_SEARCH_MAPS", DEFAULT_MAP_BUDGET))


@dataclass(frozen=True)
class FactorMap:
    """Surjection from ``source`` vertices onto ``target`` vertices, by index."""

    source: Graph
    target: Graph
    map: tuple[int, ...]
    verified: bool = False

    def as_labels(self) -> dict[str, str]:
        return {self.source.labels[i]: self.target.labels[j] for i, j in enumerate(self.map)}

    def to_text(self) -> str:
        return "".join(f"factor {u} -> {v}\n" for u, v in self.as_labels().items())


def _as_index_tuple(g: Graph, h: Graph, phi) -> tuple[int, ...]:
    if isinstance(phi, FactorMap):
        return phi.map
    if isinstance(phi, Mapping):
        out = [None] * g.n
        for a, b in phi.items():
            i = g.index(a) if isinstance(a, str) else int(a)
            j = h.index(b) if isinstance(b, str) else int(b)
            if not 0 <= j < h.n:
                raise UnknownVertex(f"target vertex {b!r} outside {h.name}")
            out[i] = j
        if any(x is None for x in out):
            raise ValueError("factor map must be total on the source vertices")
        return tuple(out)
    phi = tuple(int(x) for x in phi)
    if len(phi) != g.n:
        raise ValueError("factor map must be total on the source vertices")
    for j in phi:
        if not 0 <= j < h.n:
            raise UnknownVertex(f"target vertex index {j} outside {h.name}")
    return phi


def parse_factor_map(source: str, g: Graph, h: Graph) -> FactorMap:
    out: dict[str, str] = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "factor" or parts[2] != "->":
            raise ParseError("expected 'factor <source> -> <target>'", lineno)
        for lab, gr in ((parts[1], g), (parts[3], h)):
            if lab not in gr.labels:
                raise UnknownVertex(f"unknown vertex {lab!r}", lineno)
        out[parts[1]] = parts[3]
    return FactorMap(g, h, _as_index_tuple(g, h, out))


def _pushforward(g: Graph, h: Graph, phi: Sequence[int]) -> list[dict[int, Fraction]]:
    """Row u holds the sums of alpha(u, .) over each target cell."""
    rows: list[dict[int, Fraction]] = [{} for _ in range(g.n)]
    for (u, u2), w in g.weights.items():
        c = phi[u2]
        rows[u][c] = rows[u].get(c, ZERO) + w
    return rows


def _violations(g: Graph, h: Graph, phi: Sequence[int], with_degree: bool) -> list[tuple]:
    out: list[tuple] = []
    hit = set(phi)
    out += [("surjectivity", (v,), None) for v in range(h.n) if v not in hit]
    p, q = g.degree, h.degree
    if with_degree:
        pushed = [ZERO] * h.n
        for u, v in enumerate(phi):
            pushed[v] += p[u]
        out += [("degree", (v,), pushed[v] - q[v]) for v in range(h.n) if pushed[v] != q[v]]
    rows = _pushforward(g, h, phi)
    for u, v in enumerate(phi):
        cells = set(rows[u]) | set(h.neighbors[v])
        for v2 in sorted(cells):
            res = q[v] * rows[u].get(v2, ZERO) - p[u] * h.alpha(v, v2)
            if res:
                out.append(("transition", (v, v2, u), res))
    return out


def verify_factor(g: Graph, h: Graph, phi) -> tuple[bool, list[tuple]]:
    """Check surjectivity, degree pushforward and relative transition weights."""
    phi = _as_index_tuple(g, h, phi)
    bad = _violations(g, h, phi, with_degree=True)
    return not bad, bad


def verify_factor_connected(g: Graph, h: Graph, phi) -> tuple[bool, list[tuple]]:
    """Same verdict as ``verify_factor`` for connected targets, skipping the degree check."""
    if not is_connected(h):
        raise RequiresConnected(f"target {h.name} must be connected")
    phi = _as_index_tuple(g, h, phi)
    bad = _violations(g, h, phi, with_degree=False)
    return not bad, bad


def make_factor_map(g: Graph, h: Graph, phi) -> FactorMap:
    phi = _as_index_tuple(g, h, phi)
    return FactorMap(g, h, phi, verify_factor(g, h, phi)[0])


def compose_factors(f1: FactorMap, f2: FactorMap) -> FactorMap:
    """Given maps H -> G and K -> H, the map K -> G."""
    if f1.source != f2.target:
        raise CompositionMismatch("the inner map's target is not the outer map's source")
    if not (f1.verified and f2.verified):
        raise CompositionMismatch("both maps must be verified factor maps")
    phi = tuple(f1.map[j] for j in f2.map)
    out = make_factor_map(f2.source, f1.target, phi)
    if not out.verified:
        raise InternalInconsistency("composite of factor maps failed verification")
    return out


def find_factor_maps(g: Graph, h: Graph, budget: int | None = None) -> list[FactorMap]:
    """Every verified factor map from g onto h, by pruned exhaustive search."""
    budget = map_budget() if budget is None else budget
    if g.n < h.n:
        return []
    if h.n ** g.n > budget:
        raise SearchBudgetExceeded(f"{h.n}^{g.n} candidate maps exceed the budget {budget}")
    p, q = g.degree, h.degree
    # assign high-degree vertices first so the mass bound prunes early
    order = sorted(range(g.n), key=lambda u: (-p[u], u))
    mass = [ZERO] * h.n
    phi = [0] * g.n
    found: list[FactorMap] = []

    def extend(pos: int) -> None:
        if pos == len(order):
            if mass == list(q):
                ok, _ = verify_factor(g, h, phi)
                if ok:
                    found.append(FactorMap(g, h, tuple(phi), True))
            return
        u = order[pos]
        for v in range(h.n):
            if mass[v] + p[u] > q[v]:
                continue
            mass[v] += p[u]
            phi[u] = v
            extend(pos + 1)
            mass[v] -= p[u]

    extend(0)
    found.sort(key=lambda f: f.map)
    return found


def mutual_factor_isomorphism(g: Graph, h: Graph, budget: int | None = None) -> dict[str, str] | None:
    """A weight-preserving bijection when each graph is a factor of the other."""
    if g.n != h.n:
        return None
    there = find_factor_maps(g, h, budget)
    if not there or not find_factor_maps(h, g, budget):
        return None
    return there[0].as_labels()


# -- quotients -----------------------------------------------------------------

@dataclass(frozen=True)
class Inconsistent:
    reason: str

    def __bool__(self) -> bool:
        return False


def _cells(g: Graph, partition) -> list[list[int]]:
    cells = [sorted(g.index(x) if isinstance(x, str) else int(x) for x in cell) for cell in partition]
    flat = sorted(i for c in cells for i in c)
    if flat != list(range(g.n)) or any(not c for c in cells):
        raise ValueError("partition must split the vertex set into nonempty disjoint cells")
    return cells


def quotient_with_map(g: Graph, partition) -> tuple[Graph, FactorMap] | Inconsistent:
    cells = _cells(g, partition)
    names = ["+".join(g.labels[i] for i in c) for c in cells]
    order = sorted(range(len(cells)), key=names.__getitem__)
    slot = {old: new for new, old in enumerate(order)}
    phi = [0] * g.n
    for k, c in enumerate(cells):
        for i in c:
            phi[i] = slot[k]
    weights: dict[tuple[int, int], Fraction] = {}
    for (i, j), w in g.weights.items():
        key = (phi[i], phi[j])
        weights[key] = weights.get(key, ZERO) + w
    k = Graph([names[i] for i in order], weights, name=f"{g.name}/~")
    bad = _violations(g, k, phi, with_degree=False)
    if bad:
        return Inconsistent(f"relative transition weights not constant on cells: {bad[0]}")
    return k, FactorMap(g, k, tuple(phi), True)


def quotient_graph(g: Graph, partition) -> Graph | Inconsistent:
    """Cell-summed weights, or Inconsistent when the projection is not a factor map."""
    res = quotient_with_map(g, partition)
    return res if isinstance(res, Inconsistent) else res[0]


def restricted_growth_strings(n: int, max_blocks: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of range(n) into at most ``max_blocks`` blocks."""
    a = [0] * n

    def rec(i: int, blocks: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        for b in range(min(blocks + 1, max_blocks)):
            a[i] = b
            yield from rec(i + 1, max(blocks, b + 1))

    if n == 0:
        yield ()
        return
    a[0] = 0
    yield from rec(1, 1)


def is_nontrivial(k: Graph) -> bool:
    return sum(1 for d in k.degree if d > 0) >= 2


@lru_cache(maxsize=256)
def _quotients(g: Graph, max_size: int, budget: int) -> tuple[tuple[Graph, FactorMap], ...]:
    out = []
    count = 0
    for rgs in restricted_growth_strings(g.n, max_size):
        count += 1
        if count > budget:
            raise SearchBudgetExceeded(f"more than {budget} partitions of {g.name}")
        blocks = max(rgs) + 1
        if blocks < 2:
            continue
        cells = [[i for i, b in enumerate(rgs) if b == c] for c in range(blocks)]
        res = quotient_with_map(g, cells)
        if isinstance(res, Inconsistent) or not is_nontrivial(res[0]):
            continue
        out.append(res)
    return tuple(out)


def _invariant(k: Graph) -> tuple:
    return (k.n, tuple(sorted(k.degree)), tuple(sorted(k.weights.values())))


def common_factor_search(
    g: Graph, h: Graph, max_size: int, budget: int = DEFAULT_PARTITION_BUDGET
) -> list[tuple[Graph, FactorMap, FactorMap]]:
    """Nontrivial graphs with at most ``max_size`` vertices that are factors of both inputs.

    Results are distinct up to isomorphism; each comes with its two factor maps.
    """
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    from_h: dict[tuple, list[tuple[Graph, FactorMap]]] = {}
    for k, f in _quotients(h, max_size, budget):
        from_h.setdefault(_invariant(k), []).append((k, f))
    found: list[tuple[Graph, FactorMap, FactorMap]] = []
    for k, fg in _quotients(g, max_size, budget):
        if any(isomorphism(k, prev) is not None for prev, _, _ in found):
            continue
        for k2, fh in from_h.get(_invariant(k), []):
            iso = isomorphism(k2, k)
            if iso is None:
                continue
            phi = tuple(iso[j] for j in fh.map)
            mapped = make_factor_map(h, k, phi)
            if not mapped.verified:
                raise InternalInconsistency("isomorphic quotient did not give a factor map")
            found.append((k, fg, mapped))
            break
    return found


# -- joinings and projections ------------------------------------------------------

def projection_maps(k: WeightJoining) -> tuple[FactorMap, FactorMap]:
    """Coordinate projections of the joining graph, each checked as a factor map."""
    kg = k.as_graph()
    coords = {k.label((i, j)): (i, j) for i in range(k.left.n) for j in range(k.right.n)}
    pi1 = tuple(coords[lab][0] for lab in kg.labels)
    pi2 = tuple(coords[lab][1] for lab in kg.labels)
    return make_factor_map(kg, k.left, pi1), make_factor_map(kg, k.right, pi2)


def projection_factors(k: WeightJoining) -> tuple[FactorMap, FactorMap]:
    if not validate_joining(k).valid:
        raise InvalidJoining("projection factors need a valid joining")
    f1, f2 = projection_maps(k)
    if not (f1.verified and f2.verified):
        raise InternalInconsistency("a valid joining produced a projection that is not a factor map")
    return f1, f2

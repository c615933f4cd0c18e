"""Weight joinings, their validation, constraint systems and constructions.

Product vertices are index pairs ``(i, j)`` with ``i`` a vertex of the left
graph and ``j`` a vertex of the right graph.  A joining entry is keyed by an
ordered pair of product vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateDirection,
    InfeasibleParameter,
    InvalidCost,
    InvalidJoining,
    InvalidSize,
    InvalidWeight,
    NotAnEigenpair,
    NotASubgraph,
    NotIsomorphism,
    ParseError,
    RequiresConnected,
    RequiresConnectedNoLoops,
    RequiresUniformWeights,
    UnknownVertex,
    UnsupportedEigenvalue,
)
from .graph import (
    Graph,
    has_self_loops,
    is_connected,
    is_uniform,
    make_cycle,
    make_two_loop,
    parse_rational,
    product_label,
    transition_matrix,
)
from .linalg import ONE, ZERO, RMatrix, null_space

PVertex = tuple[int, int]
Key = tuple[PVertex, PVertex]


class WeightJoining:
    """Candidate weight function on the product of two graphs' vertex sets."""

    def __init__(
        self,
        left: Graph,
        right: Graph,
        entries: Mapping[Key, Fraction],
        raw_total: Fraction = ONE,
        name: str = "",
    ) -> None:
        self.left = left
        self.right = right
        clean: dict[Key, Fraction] = {}
        for key, w in entries.items():
            (i, j), (k, l) = key
            if not (0 <= i < left.n and 0 <= k < left.n and 0 <= j < right.n and 0 <= l < right.n):
                raise UnknownVertex(f"product vertex outside U x V in {key}")
            w = Fraction(w)
            if w < 0:
                raise InvalidWeight(f"negative joining entry at {key}")
            if w:
                clean[key] = w
        self.entries = dict(sorted(clean.items()))
        self.raw_total = Fraction(raw_total)
        self.name = name

    def gamma(self, a: PVertex, b: PVertex) -> Fraction:
        return self.entries.get((a, b), ZERO)

    @cached_property
    def degree(self) -> dict[PVertex, Fraction]:
        """Degree r on every product vertex, zeros included."""
        r = {(i, j): ZERO for i in range(self.left.n) for j in range(self.right.n)}
        for (a, _), w in self.entries.items():
            r[a] += w
        return r

    @property
    def total(self) -> Fraction:
        return sum(self.entries.values(), ZERO)

    def normalized(self) -> WeightJoining:
        t = self.total
        if t == 0:
            raise InvalidJoining("joining has no positive entry")
        return WeightJoining(
            self.left, self.right, {k: w / t for k, w in self.entries.items()}, raw_total=self.raw_total * t, name=self.name
        )

    def label(self, a: PVertex) -> str:
        return product_label(self.left.labels[a[0]], self.right.labels[a[1]])

    def as_graph(self) -> Graph:
        """The joining viewed as a graph on U x V (all product vertices kept)."""
        n, m = self.left.n, self.right.n
        labels = [product_label(u, v) for u in self.left.labels for v in self.right.labels]
        weights = {(a[0] * m + a[1], b[0] * m + b[1]): w for (a, b), w in self.entries.items()}
        if labels != sorted(labels):
            order = sorted(range(n * m), key=labels.__getitem__)
            pos = {old: new for new, old in enumerate(order)}
            labels = [labels[i] for i in order]
            weights = {(pos[a], pos[b]): w for (a, b), w in weights.items()}
        return Graph(labels, weights, name=self.name or f"{self.left.name}~{self.right.name}")

    def vector(self, index: JoiningVariableIndex) -> list[Fraction]:
        vec = [ZERO] * len(index)
        for key, w in self.entries.items():
            pos = index.position(key)
            if pos is None:
                raise InvalidJoining(f"entry {key} lies outside the support of the tensor product")
            if index.mode is IndexMode.SIMPLIFIED:
                if key <= (key[1], key[0]):
                    vec[pos] = w
            else:
                vec[pos] = w
        return vec

    @classmethod
    def from_vector(cls, left: Graph, right: Graph, index: JoiningVariableIndex, vec: Sequence[Fraction]) -> WeightJoining:
        entries: dict[Key, Fraction] = {}
        for key, w in zip(index.keys, vec):
            if w:
                entries[key] = Fraction(w)
                if index.mode is IndexMode.SIMPLIFIED:
                    entries[(key[1], key[0])] = Fraction(w)
        return cls(left, right, entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightJoining)
            and self.left == other.left
            and self.right == other.right
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"WeightJoining({self.left.name} x {self.right.name}, {len(self.entries)} entries)"

    def to_text(self) -> str:
        lines = [f"joining {self.name or 'K'}"]
        for (a, b), w in self.entries.items():
            if a <= b:
                g, h = self.left.labels, self.right.labels
                lines.append(f"jedge {g[a[0]]} {h[a[1]]} {g[b[0]]} {h[b[1]]} {w}")
        return "\n".join(lines) + "\n"


def parse_joining(source: str, left: Graph, right: Graph) -> WeightJoining:
    """Read ``jedge`` lines; the result is normalized and keeps the raw total."""
    raw: dict[Key, Fraction] = {}
    name = ""
    seen: set[frozenset] = set()
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "joining":
            name = " ".join(rest)
            continue
        if head != "jedge" or len(rest) != 5:
            raise ParseError("expected 'jedge <u> <v> <u2> <v2> <rational>'", lineno)
        try:
            a = (left.index(rest[0]), right.index(rest[1]))
            b = (left.index(rest[2]), right.index(rest[3]))
        except UnknownVertex as exc:
            raise UnknownVertex(str(exc), lineno) from None
        w = parse_rational(rest[4], lineno)
        if w < 0:
            raise InvalidWeight("joining entries must be nonnegative", lineno)
        pair = frozenset((a, b))
        if pair in seen:
            raise ParseError(f"joining entry {rest[:4]} listed twice", lineno)
        seen.add(pair)
        raw[(a, b)] = w
        raw[(b, a)] = w
    k = WeightJoining(left, right, raw, name=name)
    if k.total == 0:
        raise InvalidJoining("joining file has no positive entry")
    return k.normalized()


# -- variable index and constraint systems -------------------------------------------

class IndexMode(Enum):
    FULL = "full"
    SIMPLIFIED = "simplified"


class JoiningVariableIndex:
    """Deterministic ordering of the unknowns of a constraint system."""

    def __init__(self, g: Graph, h: Graph, mode: IndexMode = IndexMode.FULL) -> None:
        self.mode = mode
        full = sorted(((i, j), (k, l)) for i, k in g.edges for j, l in h.edges)
        if mode is IndexMode.FULL:
            self.keys = full
        else:
            self.keys = [key for key in full if key <= (key[1], key[0])]
        self._pos = {key: p for p, key in enumerate(self.keys)}

    def __len__(self) -> int:
        return len(self.keys)

    def position(self, key: Key) -> int | None:
        """Column of ``key``; a mirrored key maps to its class in SIMPLIFIED mode."""
        pos = self._pos.get(key)
        if pos is None and self.mode is IndexMode.SIMPLIFIED:
            pos = self._pos.get((key[1], key[0]))
        return pos


@dataclass
class ConstraintSystem:
    matrix: RMatrix
    index: JoiningVariableIndex
    row_tags: list[tuple] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def _dense(rows: list[dict[int, Fraction]], ncols: int) -> RMatrix:
    data = []
    for row in rows:
        dense = [ZERO] * ncols
        for c, v in row.items():
            dense[c] = v
        data.append(dense)
    return RMatrix(data, ncols)


def _by_source(index: JoiningVariableIndex) -> dict[PVertex, list[tuple[int, Key]]]:
    out: dict[PVertex, list[tuple[int, Key]]] = {}
    for pos, key in enumerate(index.keys):
        out.setdefault(key[0], []).append((pos, key))
    return out


def _transition_row(
    terms: Iterable[tuple[int, Key]], deg: Fraction, w: Fraction, hit
) -> dict[int, Fraction]:
    row: dict[int, Fraction] = {}
    for pos, key in terms:
        c = (deg if hit(key) else ZERO) - w
        if c:
            row[pos] = row.get(pos, ZERO) + c
    return row


def build_J(g: Graph, h: Graph) -> ConstraintSystem:
    """Homogeneous system whose nonnegative unit-sum solutions are the joinings."""
    index = JoiningVariableIndex(g, h)
    nvars = len(index)
    rows: list[dict[int, Fraction]] = []
    tags: list[tuple] = []
    for pos, key in enumerate(index.keys):
        mirror = (key[1], key[0])
        if key < mirror:
            rows.append({pos: ONE, index.position(mirror): -ONE})
            tags.append(("Symmetry", key))
    p, q = g.degree, h.degree
    for u in range(g.n):
        rows.append({c: (ONE if key[0][0] == u else ZERO) - p[u] for c, key in enumerate(index.keys)})
        tags.append(("DegreeCouplingLeft", u))
    for v in range(h.n):
        rows.append({c: (ONE if key[0][1] == v else ZERO) - q[v] for c, key in enumerate(index.keys)})
        tags.append(("DegreeCouplingRight", v))
    source = _by_source(index)
    for (u, v), terms in sorted(source.items()):
        for u2 in g.neighbors[u]:
            rows.append(_transition_row(terms, p[u], g.alpha(u, u2), lambda key: key[1][0] == u2))
            tags.append(("TransitionLeft", (u, v, u2)))
    for (u, v), terms in sorted(source.items()):
        for v2 in h.neighbors[v]:
            rows.append(_transition_row(terms, q[v], h.alpha(v, v2), lambda key: key[1][1] == v2))
            tags.append(("TransitionRight", (u, v, v2)))
    return ConstraintSystem(_dense([{c: x for c, x in r.items() if x} for r in rows], nvars), index, tags)


def build_Js(g: Graph, h: Graph) -> ConstraintSystem:
    """Reduced system on symmetric classes for connected loop-free pairs."""
    for x in (g, h):
        if not is_connected(x) or has_self_loops(x):
            raise RequiresConnectedNoLoops(f"graph {x.name} must be connected with no self-loops")
    index = JoiningVariableIndex(g, h, IndexMode.SIMPLIFIED)
    full = JoiningVariableIndex(g, h)
    source: dict[PVertex, list[tuple[int, Key]]] = {}
    for key in full.keys:
        source.setdefault(key[0], []).append((index.position(key), key))
    p, q = g.degree, h.degree
    rows, tags = [], []
    for (u, v), terms in sorted(source.items()):
        for u2 in g.neighbors[u][:-1]:
            rows.append(_transition_row(terms, p[u], g.alpha(u, u2), lambda key: key[1][0] == u2))
            tags.append(("TransitionLeft", (u, v, u2)))
    for (u, v), terms in sorted(source.items()):
        for v2 in h.neighbors[v][:-1]:
            rows.append(_transition_row(terms, q[v], h.alpha(v, v2), lambda key: key[1][1] == v2))
            tags.append(("TransitionRight", (u, v, v2)))
    return ConstraintSystem(_dense([{c: x for c, x in r.items() if x} for r in rows], len(index)), index, tags)


def build_Jw(g: Graph, h: Graph) -> ConstraintSystem:
    """One row per product vertex forcing r(u, v) = p(u) q(v)."""
    index = JoiningVariableIndex(g, h)
    p, q = g.degree, h.degree
    rows, tags = [], []
    for u in range(g.n):
        for v in range(h.n):
            pq = p[u] * q[v]
            rows.append({c: (ONE if key[0] == (u, v) else ZERO) - pq for c, key in enumerate(index.keys)})
            tags.append(("DegreeProduct", (u, v)))
    return ConstraintSystem(_dense([{c: x for c, x in r.items() if x} for r in rows], len(index)), index, tags)


def check_cost(g: Graph, h: Graph, cost: Mapping[PVertex, Fraction]) -> dict[PVertex, Fraction]:
    out = {}
    for (u, v), c in cost.items():
        if not (0 <= u < g.n and 0 <= v < h.n):
            raise UnknownVertex(f"cost entry at unknown product vertex {(u, v)}")
        c = Fraction(c)
        if c < 0:
            raise InvalidCost(f"negative cost {c} at {(g.labels[u], h.labels[v])}")
        if c:
            out[(u, v)] = c
    return out


def product_cost(g: Graph, h: Graph, cost: Mapping[PVertex, Fraction]) -> Fraction:
    p, q = g.degree, h.degree
    return sum((c * p[u] * q[v] for (u, v), c in cost.items()), ZERO)


def build_Jc(g: Graph, h: Graph, cost: Mapping[PVertex, Fraction]) -> ConstraintSystem:
    """Single row: expected cost under r equals the product value."""
    cost = check_cost(g, h, cost)
    index = JoiningVariableIndex(g, h)
    rho = product_cost(g, h, cost)
    row = {c: cost.get(key[0], ZERO) - rho for c, key in enumerate(index.keys)}
    return ConstraintSystem(_dense([{c: x for c, x in row.items() if x}], len(index)), index, [("CostRow",)])


# -- validation -----------------------------------------------------------------

@dataclass
class ValidationReport:
    valid: bool
    normalization_residual: Fraction
    violations: list[tuple[str, tuple, Fraction]]

    def tags(self) -> set[str]:
        return {t for t, _, _ in self.violations}


def validate_joining(k: WeightJoining, degree_coupling: bool = True) -> ValidationReport:
    """Check symmetry, normalization, degree coupling and transition coupling exactly.

    With ``degree_coupling=False`` the degree-coupling family is skipped; for
    connected graphs this gives the same verdict.
    """
    g, h = k.left, k.right
    p, q = g.degree, h.degree
    r = k.degree
    violations: list[tuple[str, tuple, Fraction]] = []
    for key, w in k.entries.items():
        mirror = (key[1], key[0])
        other = k.entries.get(mirror, ZERO)
        if other != w and (key < mirror or mirror not in k.entries):
            violations.append(("Symmetry", key, w - other))
    norm = k.total - 1
    if norm:
        violations.append(("Normalization", (), norm))
    if degree_coupling:
        for u in range(g.n):
            res = sum((r[(u, v)] for v in range(h.n)), ZERO) - p[u]
            if res:
                violations.append(("DegreeCouplingLeft", (u,), res))
        for v in range(h.n):
            res = sum((r[(u, v)] for u in range(g.n)), ZERO) - q[v]
            if res:
                violations.append(("DegreeCouplingRight", (v,), res))
    left: dict[tuple[int, int, int], Fraction] = {}
    right: dict[tuple[int, int, int], Fraction] = {}
    for ((u, v), (u2, v2)), w in k.entries.items():
        left[(u, v, u2)] = left.get((u, v, u2), ZERO) + w
        right[(u, v, v2)] = right.get((u, v, v2), ZERO) + w
    cand_left = set(left)
    cand_right = set(right)
    for (u, v), rv in r.items():
        if rv:
            cand_left.update((u, v, u2) for u2 in g.neighbors[u])
            cand_right.update((u, v, v2) for v2 in h.neighbors[v])
    for u, v, u2 in sorted(cand_left):
        res = p[u] * left.get((u, v, u2), ZERO) - g.alpha(u, u2) * r[(u, v)]
        if res:
            violations.append(("TransitionLeft", (u, v, u2), res))
    for u, v, v2 in sorted(cand_right):
        res = q[v] * right.get((u, v, v2), ZERO) - h.alpha(v, v2) * r[(u, v)]
        if res:
            violations.append(("TransitionRight", (u, v, v2), res))
    return ValidationReport(not violations, norm, violations)


@dataclass
class PreservationReport:
    vertex_violations: list[PVertex]
    edge_violations: list[Key]
    zero_degree_pairs: list[PVertex]

    @property
    def ok(self) -> bool:
        return not self.vertex_violations and not self.edge_violations


def check_preservation(k: WeightJoining) -> PreservationReport:
    """Support of r inside support of p x q, support of gamma inside alpha x beta."""
    g, h = k.left, k.right
    p, q = g.degree, h.degree
    vertex_bad, zero_pairs = [], []
    for (u, v), rv in k.degree.items():
        pq = p[u] * q[v]
        if rv and not pq:
            vertex_bad.append((u, v))
        elif pq and not rv:
            zero_pairs.append((u, v))
    edge_bad = [
        key for key in k.entries
        if not (g.alpha(key[0][0], key[1][0]) and h.alpha(key[0][1], key[1][1]))
    ]
    return PreservationReport(vertex_bad, edge_bad, zero_pairs)


# -- constructions ---------------------------------------------------------------

def product_joining(g: Graph, h: Graph) -> WeightJoining:
    entries = {
        ((i, j), (k, l)): a * b
        for (i, k), a in g.weights.items()
        for (j, l), b in h.weights.items()
    }
    return WeightJoining(g, h, entries, name="product")


def _as_index_map(g: Graph, h: Graph, iso: Mapping) -> dict[int, int]:
    out = {}
    for a, b in iso.items():
        i = g.index(a) if isinstance(a, str) else int(a)
        j = h.index(b) if isinstance(b, str) else int(b)
        out[i] = j
    return out


def bijective_joining(g: Graph, h: Graph, iso: Mapping) -> WeightJoining:
    """Joining concentrated on the graph of a weight-preserving bijection."""
    if g.n != h.n:
        raise NotIsomorphism(f"vertex counts differ: {g.n} vs {h.n}")
    f = _as_index_map(g, h, iso)
    if sorted(f) != list(range(g.n)) or sorted(f.values()) != list(range(h.n)):
        raise NotIsomorphism("map is not a bijection of the vertex sets")
    for i in range(g.n):
        for k in range(g.n):
            if g.alpha(i, k) != h.alpha(f[i], f[k]):
                raise NotIsomorphism(f"weight differs at {(g.labels[i], g.labels[k])}")
    entries = {((i, f[i]), (k, f[k])): w for (i, k), w in g.weights.items()}
    return WeightJoining(g, h, entries, name="bijective")


def diagonal_cycle_joining(m: int, n: int) -> WeightJoining:
    """Both walks step in the same direction at every move."""
    if m < 3 or n < 3:
        raise InvalidSize(f"cycles need at least 3 vertices, got {m} and {n}")
    g, h = make_cycle(m, "u"), make_cycle(n, "v")
    w = Fraction(1, 2 * m * n)
    entries = {}
    for i in range(m):
        for j in range(n):
            for s in (1, -1):
                entries[((i, j), ((i + s) % m, (j + s) % n))] = w
    return WeightJoining(g, h, entries, name=f"diagonal({m},{n})")


def two_loop_joining(a1, b1, x) -> WeightJoining:
    """Joining of two two-loop graphs supported on the four diagonal loops."""
    a1, b1, x = Fraction(a1), Fraction(b1), Fraction(x)
    g, h = make_two_loop(a1, "u"), make_two_loop(b1, "v")
    lo, hi = max(ZERO, a1 + b1 - 1), min(a1, b1)
    if not lo <= x <= hi:
        raise InfeasibleParameter(f"x = {x} outside [{lo}, {hi}]")
    vals = {(0, 0): x, (0, 1): a1 - x, (1, 0): b1 - x, (1, 1): 1 - a1 - b1 + x}
    return WeightJoining(g, h, {(a, a): w for a, w in vals.items()}, name="two-loop")


def left_eigenvectors(g: Graph, lam) -> list[list[Fraction]]:
    """Rational basis of {x : P^T x = lam x}."""
    pt = transition_matrix(g).transpose()
    lam = Fraction(lam)
    shifted = RMatrix([[pt[i, j] - (lam if i == j else ZERO) for j in range(g.n)] for i in range(g.n)], g.n)
    return [v.col(0) for v in null_space(shifted)]


def perturbation_bracket(g: Graph, h: Graph, lam, x: Sequence, y: Sequence) -> dict[Key, Fraction]:
    """Per-entry coefficient b with gamma_t = alpha * beta * (1 + t * b)."""
    p, q = g.degree, h.degree
    lam = Fraction(lam)
    scale = 1 / (1 - lam * lam)
    out = {}
    for (i, k), _ in g.weights.items():
        for (j, l), _ in h.weights.items():
            b = (
                x[i] * y[j] / (p[i] * q[j])
                + x[k] * y[l] / (p[k] * q[l])
                - lam * x[k] * y[j] / (p[k] * q[j])
                - lam * x[i] * y[l] / (p[i] * q[l])
            )
            out[((i, j), (k, l))] = scale * b
    return out


AUTO = "auto"


def perturbation_joining(g: Graph, h: Graph, lam, x: Sequence, y: Sequence, t=AUTO) -> WeightJoining:
    """Joining whose degree is p x q + t x y^T, from a shared eigenvalue."""
    for gr in (g, h):
        if not is_connected(gr):
            raise RequiresConnected(f"graph {gr.name} must be connected")
    lam = Fraction(lam)
    if lam in (1, -1):
        raise UnsupportedEigenvalue(f"eigenvalue {lam} is excluded")
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    if len(x) != g.n or len(y) != h.n:
        raise NotAnEigenpair("eigenvector length does not match the graph")
    P, Qm = transition_matrix(g), transition_matrix(h)
    if P.transpose().apply(x) != [lam * v for v in x] or Qm.transpose().apply(y) != [lam * v for v in y]:
        raise NotAnEigenpair(f"vectors are not left eigenvectors for {lam}")
    bracket = perturbation_bracket(g, h, lam, x, y)
    neg = [b for b in bracket.values() if b < 0]
    if t == AUTO:
        if not neg:
            raise DegenerateDirection("perturbation direction is zero; no positive t exists")
        t = min(-1 / b for b in neg) / 2
    t = Fraction(t)
    entries = {}
    for key, b in bracket.items():
        (i, j), (k, l) = key
        w = g.alpha(i, k) * h.alpha(j, l) * (1 + t * b)
        if w < 0:
            raise InfeasibleParameter(f"t = {t} makes entry {key} negative")
        entries[key] = w
    k = WeightJoining(g, h, entries, name=f"perturbation(t={t})")
    k.t = t
    return k


def _embed(sub: Graph, sup: Graph) -> dict[int, int]:
    """Label-preserving embedding of an induced subgraph."""
    try:
        emb = {i: sup.index(lab) for i, lab in enumerate(sub.labels)}
    except UnknownVertex:
        raise NotASubgraph(f"{sub.name} has a vertex missing from {sup.name}") from None
    for i, k in sub.edges:
        if not sup.alpha(emb[i], emb[k]):
            raise NotASubgraph(f"edge {(sub.labels[i], sub.labels[k])} missing from {sup.name}")
    inside = set(emb.values())
    count = sum(1 for i, k in sup.edges if i in inside and k in inside)
    if count != len(sub.edges):
        raise NotASubgraph(f"{sup.name} adds edges among the vertices of {sub.name}")
    return emb


def _extend_left(k: WeightJoining, sup: Graph) -> WeightJoining:
    g, h = k.left, k.right
    emb = _embed(g, sup)
    ratio = Fraction(len(g.edges), len(sup.edges))
    inside = set(emb.values())
    entries: dict[Key, Fraction] = {}
    for ((i, j), (i2, j2)), w in k.entries.items():
        entries[((emb[i], j), (emb[i2], j2))] = w * ratio
    for (a, b), wa in sup.weights.items():
        if a in inside and b in inside:
            continue
        for (j, l), wb in h.weights.items():
            entries[((a, j), (b, l))] = wa * wb
    return WeightJoining(sup, h, entries, name=k.name)


def _swap(k: WeightJoining) -> WeightJoining:
    return WeightJoining(
        k.right, k.left, {((j, i), (l, k2)): w for ((i, j), (k2, l)), w in k.entries.items()}, name=k.name
    )


def supergraph_extension_joining(gamma: WeightJoining, g_super: Graph, h_super: Graph) -> WeightJoining:
    """Extend a product-degree joining of subgraphs to the supergraphs.

    The subgraphs must be induced: the supergraph may not add edges between
    two vertices that are already present.
    """
    for x in (gamma.left, gamma.right, g_super, h_super):
        if not is_uniform(x):
            raise RequiresUniformWeights(f"graph {x.name} is not uniformly weighted")
    for x in (g_super, h_super):
        if not is_connected(x) or has_self_loops(x):
            raise RequiresConnectedNoLoops(f"graph {x.name} must be connected with no self-loops")
    p, q = gamma.left.degree, gamma.right.degree
    if any(r != p[u] * q[v] for (u, v), r in gamma.degree.items()):
        raise InvalidJoining("the joining to extend must have product degree")
    step = _extend_left(gamma, g_super)
    step = _swap(_extend_left(_swap(step), h_super))
    return step

"""Decision procedures for strong, weak and cost-wise disjointness."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CharacterizationInapplicable,
    EmptyGraph,
    InternalInconsistency,
    InvalidWeight,
    NotFullySupported,
    RequiresConnected,
)
from .graph import (
    Graph,
    has_self_loops,
    is_bipartite_structural,
    is_connected,
    is_forest,
    is_fully_supported,
    make_path,
    make_two_loop,
    transition_matrix,
)
from .joining import (
    PVertex,
    WeightJoining,
    build_J,
    build_Jc,
    build_Jw,
    product_joining,
)
from .linalg import ZERO, Echelon, RPoly, char_poly, eval_poly, null_space, poly_gcd


@dataclass
class Trace:
    procedure: str
    numbers: dict = field(default_factory=dict)
    witness: WeightJoining | None = None

    def as_dict(self) -> dict:
        return {"procedure": self.procedure, **{k: _plain(v) for k, v in self.numbers.items()}}


def _plain(v):
    if isinstance(v, (Fraction, RPoly)):
        return str(v)
    return v


@dataclass
class DisjointnessVerdict:
    strong: bool
    weak: bool
    c_disjoint: dict[str, bool] = field(default_factory=dict)
    method_trace: list[Trace] = field(default_factory=list)
    witnesses: dict[str, WeightJoining] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.strong and not self.weak:
            raise InternalInconsistency("strong disjointness without weak disjointness")


# -- witnesses ------------------------------------------------------------------

def _interior_shift(gp: Sequence[Fraction], other: Sequence[Fraction]) -> list[Fraction] | None:
    """Point strictly between the product and a second null vector, or None."""
    s = sum(other, ZERO)
    d = [o - s * a for o, a in zip(other, gp)]
    neg = [a / -x for a, x in zip(gp, d) if x < 0]
    if not neg:
        return None
    t = min(neg) / 2
    return [a + t * x for a, x in zip(gp, d)]


def _witness(g: Graph, h: Graph, basis, index, accept) -> WeightJoining | None:
    gp = product_joining(g, h).vector(index)
    for v in basis:
        vec = v.col(0)
        if not accept(vec):
            continue
        point = _interior_shift(gp, vec)
        if point is not None:
            return WeightJoining.from_vector(g, h, index, point)
    return None


# -- decision procedures ------------------------------------------------------------

def strong_disjoint(g: Graph, h: Graph) -> tuple[bool, Trace]:
    """Strong iff the constraint matrix has a one-dimensional null space."""
    system = build_J(g, h)
    basis = null_space(system.matrix)
    dim = len(basis)
    trace = Trace("strong_rank", {"variables": len(system.index), "rows": system.matrix.rows,
                                  "rank_J": system.matrix.cols - dim, "null_dim": dim})
    if dim > 1:
        gp = product_joining(g, h).vector(system.index)

        def independent(vec):
            s = sum(vec, ZERO)
            return any(x != s * a for x, a in zip(vec, gp))

        trace.witness = _witness(g, h, basis, system.index, independent)
    return dim == 1, trace


def weak_disjoint_rank(g: Graph, h: Graph) -> tuple[bool, Trace]:
    """Weak iff appending the product-degree rows leaves the rank unchanged."""
    system = build_J(g, h)
    space = Echelon(system.matrix.data)
    rank_j = space.rank
    extra = build_Jw(g, h).matrix
    for row in extra.data:
        space.add(row)
    ok = space.rank == rank_j
    trace = Trace("weak_rank", {"rank_J": rank_j, "rank_J_Jw": space.rank})
    if not ok:
        basis = null_space(system.matrix)

        def moves_degree(vec):
            return any(x for x in extra.apply(vec))

        trace.witness = _witness(g, h, basis, system.index, moves_degree)
    return ok, trace


def spectral_gcd(g: Graph, h: Graph) -> RPoly:
    return poly_gcd(char_poly(transition_matrix(g)), char_poly(transition_matrix(h)))


def weak_disjoint_spectral(g: Graph, h: Graph) -> tuple[bool, Trace]:
    """Weak iff the characteristic polynomials have gcd exactly x - 1."""
    if not (is_fully_supported(g) and is_fully_supported(h)):
        raise NotFullySupported("spectral test needs fully supported graphs")
    d = spectral_gcd(g, h)
    ok = d.degree == 1 and eval_poly(d, 1) == 0
    return ok, Trace("weak_spectral", {"gcd": d, "gcd_degree": d.degree})


def weak_disjoint(g: Graph, h: Graph) -> tuple[bool, Trace]:
    if is_fully_supported(g) and is_fully_supported(h):
        return weak_disjoint_spectral(g, h)
    return weak_disjoint_rank(g, h)


def c_disjoint(g: Graph, h: Graph, cost: Mapping[PVertex, Fraction]) -> tuple[bool, Trace]:
    """Product joining is a minimizer for ``cost`` iff the cost row adds no rank."""
    system = build_J(g, h)
    row = build_Jc(g, h, cost).matrix.data[0]
    space = Echelon(system.matrix.data)
    rank_j = space.rank
    space.add(row)
    return space.rank == rank_j, Trace("c_rank", {"rank_J": rank_j, "rank_J_Jc": space.rank})


def strong_via_tree_characterization(g: Graph, h: Graph) -> tuple[bool, Trace]:
    """Strong iff weak and exactly one graph is a forest (a tree when connected)."""
    for x in (g, h):
        if has_self_loops(x):
            raise CharacterizationInapplicable(f"graph {x.name} has self-loops")
        if not is_fully_supported(x):
            raise CharacterizationInapplicable(f"graph {x.name} has a vertex of degree zero")
    weak, inner = weak_disjoint_spectral(g, h)
    forests = (is_forest(g), is_forest(h))
    form = "tree" if is_connected(g) and is_connected(h) else "forest"
    ok = weak and forests[0] != forests[1]
    return ok, Trace("strong_" + form, {"weak": weak, "forest_left": forests[0], "forest_right": forests[1],
                                        "gcd": inner.numbers["gcd"]})


def indicator_cost(u: int, v: int) -> dict[PVertex, Fraction]:
    return {(u, v): Fraction(1)}


def classify_pair(
    g: Graph, h: Graph, costs: Mapping[str, Mapping[PVertex, Fraction]] | None = None
) -> DisjointnessVerdict:
    """Run every applicable procedure and cross-check the answers."""
    traces: list[Trace] = []
    strong, t_strong = strong_disjoint(g, h)
    weak, t_weak = weak_disjoint_rank(g, h)
    traces += [t_strong, t_weak]
    witnesses = {}
    if t_strong.witness is not None:
        witnesses["strong"] = t_strong.witness
    if t_weak.witness is not None:
        witnesses["weak"] = t_weak.witness

    def mismatch(what: str) -> InternalInconsistency:
        detail = "; ".join(str(t.as_dict()) for t in traces)
        return InternalInconsistency(f"{what} disagree for {g.name} / {h.name}: {detail}")

    if is_fully_supported(g) and is_fully_supported(h):
        spectral, t_spec = weak_disjoint_spectral(g, h)
        traces.append(t_spec)
        if spectral != weak:
            raise mismatch("rank and spectral weak tests")
        if not has_self_loops(g) and not has_self_loops(h):
            tree, t_tree = strong_via_tree_characterization(g, h)
            traces.append(t_tree)
            if tree != strong:
                raise mismatch("rank and tree-characterization strong tests")
    if strong and not weak:
        raise mismatch("strong and weak verdicts")
    verdicts = {}
    for name, cost in (costs or {}).items():
        ok, t_cost = c_disjoint(g, h, cost)
        t_cost.numbers["cost"] = name
        traces.append(t_cost)
        if weak and not ok:
            raise mismatch(f"weak verdict and cost {name}")
        verdicts[name] = ok
    return DisjointnessVerdict(strong, weak, verdicts, traces, witnesses)


# -- characterizations via disjointness ---------------------------------------------

def bipartite_via_disjointness(g: Graph) -> bool:
    """Bipartite iff not strongly disjoint from the single edge."""
    from .factor import find_factor_maps

    if not is_connected(g):
        raise RequiresConnected(f"graph {g.name} must be connected")
    p2 = make_path(2, "b")
    result = not strong_disjoint(g, p2)[0]
    if result != is_bipartite_structural(g):
        raise InternalInconsistency("disjointness and structural bipartiteness disagree")
    if result != bool(find_factor_maps(g, p2)):
        raise InternalInconsistency("disjointness and the edge-factor search disagree")
    return result


def connected_via_disjointness(g: Graph, loop_masses: tuple = (Fraction(1, 2), Fraction(1, 2))) -> bool:
    """Connected iff strongly disjoint from a two-loop graph."""
    a, b = (Fraction(x) for x in loop_masses)
    if a <= 0 or b <= 0 or a + b != 1:
        raise InvalidWeight(f"loop masses must be positive and sum to 1, got {a}, {b}")
    if not is_fully_supported(g):
        raise NotFullySupported(f"graph {g.name} has a vertex of degree zero")
    result = strong_disjoint(g, make_two_loop(a, "w"))[0]
    if result != is_connected(g):
        raise InternalInconsistency("disjointness and structural connectivity disagree")
    return result


# -- persistence experiment -------------------------------------------------------------

class Mode(Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass
class PersistenceReport:
    mode: str
    samples: int
    seed: int
    disjoint: int
    fraction: Fraction
    verdict: str

    def as_dict(self) -> dict:
        return {"mode": self.mode, "samples": self.samples, "seed": self.seed, "disjoint": self.disjoint,
                "fraction": str(self.fraction), "fraction_float": float(self.fraction), "verdict": self.verdict}


Skeleton = tuple[Sequence[str], Iterable[tuple[str, str]]]

# Each undirected edge weight is an integer drawn uniformly from [1, 2**32].
SAMPLE_RESOLUTION = 2**32


def _undirected(edges: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    out = sorted({(min(u, v), max(u, v)) for u, v in edges})
    if not out:
        raise EmptyGraph("skeleton has no edges")
    return out


def sample_weight_function(skeleton: Skeleton, rng: np.random.Generator, name: str = "") -> Graph:
    """Draw a weight function with exactly the skeleton's support."""
    labels, edges = skeleton
    edges = _undirected(edges)
    draws = rng.integers(1, SAMPLE_RESOLUTION, size=len(edges), endpoint=True)
    plain = [(u, v, Fraction(int(w))) for (u, v), w in zip(edges, draws) if u != v]
    loops = [(u, Fraction(int(w))) for (u, v), w in zip(edges, draws) if u == v]
    return Graph.from_edges(labels, plain, loops, name=name)


def persistence_experiment(
    skeleton_g: Skeleton, skeleton_h: Skeleton, samples: int, seed: int = 0, mode: Mode | str = Mode.WEAK
) -> PersistenceReport:
    """Fraction of random weightings on two skeletons that are disjoint."""
    mode = Mode(mode)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    _undirected(skeleton_g[1])
    _undirected(skeleton_h[1])
    # one child stream per sample keeps results independent of evaluation order
    streams = np.random.SeedSequence(seed).spawn(samples)
    hits = 0
    for ss in streams:
        rng = np.random.Generator(np.random.PCG64(ss))
        g = sample_weight_function(skeleton_g, rng, "G")
        h = sample_weight_function(skeleton_h, rng, "H")
        ok = weak_disjoint(g, h)[0] if mode is Mode.WEAK else strong_disjoint(g, h)[0]
        hits += ok
    frac = Fraction(hits, samples)
    return PersistenceReport(mode.value, samples, seed, hits, frac, "DICHOTOMY-1" if hits == 0 else "DICHOTOMY-2")


def skeleton_of(g: Graph) -> Skeleton:
    return list(g.labels), [(g.labels[i], g.labels[j]) for i, j in g.undirected_edges]

"""Reversible Markov chains and their correspondence with graphs.

Simulation draws raw 64-bit outputs from numpy's PCG64 generator and picks
the next state by exact integer comparison against the cumulative rational
row, so the selection bias is below 2**-64 per draw.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .disjointness import DisjointnessVerdict, classify_pair, strong_disjoint, weak_disjoint
from .errors import InvalidJoining, NotFullySupported, NotReversible, ParseError, UnknownVertex
from .graph import Graph, is_fully_supported, make_path, make_two_loop, parse_rational, transition_matrix
from .joining import PVertex, WeightJoining, validate_joining
from .linalg import ONE, ZERO, RMatrix

TWO64 = 2**64


@dataclass(frozen=True)
class ReversibleChain:
    """Kernel ``R`` and stationary law ``r`` in detailed balance."""

    states: tuple[str, ...]
    kernel: RMatrix
    stationary: tuple[Fraction, ...]
    coords: tuple[PVertex, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = len(self.states)
        if self.kernel.shape != (n, n) or len(self.stationary) != n:
            raise NotReversible("kernel and stationary law do not match the state list")
        if sum(self.stationary, ZERO) != 1 or any(x <= 0 for x in self.stationary):
            raise NotReversible("stationary law must be positive and sum to 1")
        for i in range(n):
            row = self.kernel.data[i]
            if any(x < 0 for x in row) or sum(row, ZERO) != 1:
                raise NotReversible(f"kernel row {self.states[i]} is not a probability vector")
        r, R = self.stationary, self.kernel.data
        for i in range(n):
            for j in range(i + 1, n):
                if r[i] * R[i][j] != r[j] * R[j][i]:
                    raise NotReversible(f"detailed balance fails between {self.states[i]} and {self.states[j]}")

    @property
    def n(self) -> int:
        return len(self.states)

    def edge_law(self) -> dict[tuple[int, int], Fraction]:
        r, R = self.stationary, self.kernel.data
        return {(i, j): r[i] * R[i][j] for i in range(self.n) for j in range(self.n) if R[i][j]}

    def to_text(self, name: str = "X") -> str:
        lines = [f"chain {name}", "state " + " ".join(self.states)]
        for i, s in enumerate(self.states):
            for j, t in enumerate(self.states):
                if self.kernel.data[i][j]:
                    lines.append(f"trans {s} {t} {self.kernel.data[i][j]}")
        lines += [f"pi {s} {x}" for s, x in zip(self.states, self.stationary)]
        return "\n".join(lines) + "\n"


def make_chain(states: Sequence[str], kernel, stationary: Sequence, coords=None) -> ReversibleChain:
    """Build a chain with states put in canonical (sorted) order."""
    order = sorted(range(len(states)), key=lambda i: states[i])
    K = RMatrix(kernel) if not isinstance(kernel, RMatrix) else kernel
    data = [[K.data[i][j] for j in order] for i in order]
    return ReversibleChain(
        tuple(states[i] for i in order),
        RMatrix(data, len(order)),
        tuple(Fraction(stationary[i]) for i in order),
        None if coords is None else tuple(coords[i] for i in order),
    )


def chain_from_graph(g: Graph) -> ReversibleChain:
    if not is_fully_supported(g):
        raise NotFullySupported(f"graph {g.name} has a vertex of degree zero")
    return ReversibleChain(g.labels, transition_matrix(g), g.degree)


def graph_from_chain(c: ReversibleChain, name: str = "") -> Graph:
    law = c.edge_law()
    tmp = {(c.states[i], c.states[j]): w for (i, j), w in law.items()}
    labels = sorted(c.states)
    idx = {s: k for k, s in enumerate(labels)}
    return Graph(labels, {(idx[a], idx[b]): w for (a, b), w in tmp.items()}, name=name)


def parse_chain(source: str) -> ReversibleChain:
    states: list[str] = []
    trans: dict[tuple[str, str], Fraction] = {}
    pi: dict[str, Fraction] = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "chain":
            continue
        if head == "state":
            states += rest
        elif head == "trans" and len(rest) == 3:
            trans[(rest[0], rest[1])] = parse_rational(rest[2], lineno)
        elif head == "pi" and len(rest) == 2:
            pi[rest[0]] = parse_rational(rest[1], lineno)
        else:
            raise ParseError(f"unexpected chain line {line!r}", lineno)
    known = set(states)
    for s in [a for pair in trans for a in pair] + list(pi):
        if s not in known:
            raise UnknownVertex(f"unknown state {s!r}")
    kernel = [[trans.get((s, t), ZERO) for t in states] for s in states]
    return make_chain(states, kernel, [pi.get(s, ZERO) for s in states])


def coupling_from_joining(k: WeightJoining) -> ReversibleChain:
    """Chain on the positive-degree product vertices with kernel gamma / r."""
    if not validate_joining(k).valid:
        raise InvalidJoining("coupling chain needs a valid joining")
    r = k.degree
    active = [a for a in sorted(r) if r[a] > 0]
    pos = {a: i for i, a in enumerate(active)}
    kernel = [[ZERO] * len(active) for _ in active]
    for (a, b), w in k.entries.items():
        kernel[pos[a]][pos[b]] = w / r[a]
    return make_chain([k.label(a) for a in active], kernel, [r[a] for a in active], coords=active)


def lumped_kernel(c: ReversibleChain, cell: Sequence[int], ncells: int) -> RMatrix | None:
    """Cell-to-cell kernel when every state of a cell has the same aggregated row."""
    rows: list[list[Fraction] | None] = [None] * ncells
    for i in range(c.n):
        agg = [ZERO] * ncells
        for j, x in enumerate(c.kernel.data[i]):
            if x:
                agg[cell[j]] += x
        if rows[cell[i]] is None:
            rows[cell[i]] = agg
        elif rows[cell[i]] != agg:
            return None
    if any(r is None for r in rows):
        return None
    return RMatrix(rows, ncells)


def marginal_kernel(c: ReversibleChain, side: int, size: int) -> RMatrix | None:
    """Lumped kernel of a coupling chain along one coordinate."""
    if c.coords is None:
        raise ValueError("chain carries no product coordinates")
    return lumped_kernel(c, [a[side] for a in c.coords], size)


# -- simulation ----------------------------------------------------------------

@dataclass(frozen=True)
class TrajectorySample:
    seed: int
    steps: int
    path: tuple[int, ...]


def _thresholds(probs: Sequence[Fraction]) -> tuple[int, list[int]]:
    den = lcm(*(Fraction(p).denominator for p in probs))
    acc, out = 0, []
    for p in probs:
        acc += Fraction(p).numerator * (den // Fraction(p).denominator)
        out.append(acc * TWO64)
    return den, out


def _pick(table: tuple[int, list[int]], u: int) -> int:
    den, thr = table
    return bisect_right(thr, u * den)


def simulate(c: ReversibleChain, steps: int, seed: int = 0) -> TrajectorySample:
    """Stationary trajectory of ``steps`` moves."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    bits = np.random.PCG64(np.random.SeedSequence(seed))
    draws = bits.random_raw(steps + 1)
    start = _thresholds(c.stationary)
    rows = [_thresholds(c.kernel.data[i]) for i in range(c.n)]
    s = _pick(start, int(draws[0]))
    path = [s]
    for k in range(1, steps + 1):
        s = _pick(rows[s], int(draws[k]))
        path.append(s)
    return TrajectorySample(seed, steps, tuple(path))


def project(sample: TrajectorySample, c: ReversibleChain, side: int) -> TrajectorySample:
    """Coordinate trajectory of a coupling-chain sample."""
    if c.coords is None:
        raise ValueError("chain carries no product coordinates")
    return TrajectorySample(sample.seed, sample.steps, tuple(c.coords[s][side] for s in sample.path))


def _tv(p: Sequence[float], q: Sequence[float]) -> float:
    return float(0.5 * sum(abs(a - b) for a, b in zip(p, q)))


@dataclass
class EmpiricalReport:
    stationary_tv: float
    kernel_tv: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.stationary_tv <= self.tolerance and self.kernel_tv <= self.tolerance

    def as_dict(self) -> dict:
        return {"stationary_tv": self.stationary_tv, "kernel_tv": self.kernel_tv,
                "tolerance": self.tolerance, "passed": self.passed}


def empirical_check(sample: TrajectorySample, c: ReversibleChain, tolerance=Fraction(1, 50)) -> EmpiricalReport:
    """Total-variation distances of visit and one-step frequencies.

    ``kernel_tv`` is the largest row distance over visited states.
    """
    n = c.n
    visits = np.bincount(np.asarray(sample.path), minlength=n).astype(float)
    freq = visits / visits.sum()
    stat_tv = _tv(freq, [float(x) for x in c.stationary])
    counts = np.zeros((n, n))
    np.add.at(counts, (np.asarray(sample.path[:-1]), np.asarray(sample.path[1:])), 1)
    worst = 0.0
    for i in range(n):
        total = counts[i].sum()
        if total:
            worst = max(worst, _tv(counts[i] / total, [float(x) for x in c.kernel.data[i]]))
    return EmpiricalReport(stat_tv, worst, float(tolerance))


# -- M-disjointness ---------------------------------------------------------------

class Kind(Enum):
    STRONG = "strong"
    WEAK = "weak"


def m_classify(x: ReversibleChain, y: ReversibleChain, costs=None) -> DisjointnessVerdict:
    return classify_pair(graph_from_chain(x, "X"), graph_from_chain(y, "Y"), costs)


def m_disjoint(x: ReversibleChain, y: ReversibleChain, kind: Kind | str = Kind.STRONG) -> bool:
    kind = Kind(kind)
    g, h = graph_from_chain(x, "X"), graph_from_chain(y, "Y")
    return (strong_disjoint if kind is Kind.STRONG else weak_disjoint)(g, h)[0]


def flip_chain() -> ReversibleChain:
    return chain_from_graph(make_path(2, "f"))


def fixed_chain(masses=(Fraction(1, 2), Fraction(1, 2))) -> ReversibleChain:
    a = Fraction(masses[0])
    if a + Fraction(masses[1]) != ONE:
        raise NotReversible("masses must sum to 1")
    return chain_from_graph(make_two_loop(a, "x"))


def has_period_two(x: ReversibleChain) -> bool:
    """For an irreducible chain, period two iff not strongly disjoint from the flip chain."""
    return not m_disjoint(x, flip_chain(), Kind.STRONG)


def is_irreducible(x: ReversibleChain, masses=(Fraction(1, 2), Fraction(1, 2))) -> bool:
    return m_disjoint(x, fixed_chain(masses), Kind.STRONG)

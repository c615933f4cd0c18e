"""Exact linear programming over the joining polytope.

The solver is a dense two-phase primal simplex over ``Fraction`` with
Bland's rule.  Equality rows are first reduced to an independent set in
reduced row echelon form, so the pivot columns give a starting basis and
artificial variables are only needed for rows with a negative right-hand
side.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ParseError, SearchBudgetExceeded, UnknownVertex
from .graph import Graph, parse_rational
from .joining import PVertex, WeightJoining, build_J, check_cost, product_cost, validate_joining
from .linalg import ONE, ZERO, RMatrix, rref

DEFAULT_LP_VARS = 400


def lp_budget() -> int:
    return int(os.environ.get("GRAPHJOIN_LP_VARS", DEFAULT_LP_VARS))


class Sense(Enum):
    MIN = "min"
    MAX = "max"


class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPProblem:
    """Optimize ``c . x`` subject to ``A x = b`` and ``x >= 0``."""

    A: RMatrix
    b: Sequence[Fraction]
    c: Sequence[Fraction]
    sense: Sense = Sense.MIN

    def __post_init__(self) -> None:
        if len(self.b) != self.A.rows or len(self.c) != self.A.cols:
            raise ValueError("LP dimensions are inconsistent")


@dataclass
class LPSolution:
    status: Status
    value: Fraction | None = None
    point: list[Fraction] | None = None
    basis: list[int] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    """Rows ``[a_1 .. a_n | rhs]`` with one basic column per row."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int) -> None:
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def copy(self) -> _Tableau:
        t = _Tableau([list(r) for r in self.rows], list(self.basis), self.ncols)
        t.pivots = self.pivots
        return t

    def pivot(self, i: int, j: int, obj: list[Fraction] | None = None) -> None:
        prow = self.rows[i]
        lead = prow[j]
        if lead != 1:
            prow[:] = [x / lead for x in prow]
        nz = [(k, x) for k, x in enumerate(prow) if x]
        targets = self.rows if obj is None else self.rows + [obj]
        for r, row in enumerate(targets):
            if r == i:
                continue
            f = row[j]
            if f:
                for k, x in nz:
                    row[k] -= f * x
        self.basis[i] = j
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        obj = list(cost) + [ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for k, x in enumerate(self.rows[i]):
                    if x:
                        obj[k] -= cb * x
        return obj

    def run(self, cost: Sequence[Fraction], allowed: int) -> Status:
        """Minimize ``cost`` with Bland's rule over columns ``< allowed``."""
        obj = self.reduced_costs(cost)
        while True:
            basic = set(self.basis)
            enter = next((j for j in range(allowed) if obj[j] < 0 and j not in basic), None)
            if enter is None:
                return Status.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return Status.UNBOUNDED
            self.pivot(best[1], enter, obj)

    def point(self, n: int) -> list[Fraction]:
        x = [ZERO] * n
        for i, b in enumerate(self.basis):
            if b < n:
                x[b] = self.rows[i][-1]
        return x


def _feasible_tableau(A: RMatrix, b: Sequence[Fraction]) -> _Tableau | None:
    """Phase one: a basic feasible tableau over the original columns, or None."""
    n = A.cols
    aug = RMatrix([list(row) + [Fraction(bi)] for row, bi in zip(A.data, b)], n + 1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    rows = [red.data[i][:n] + [red.data[i][n]] for i in range(len(pivots))]
    m = len(rows)
    negative = [i for i in range(m) if rows[i][-1] < 0]
    if not negative:
        return _Tableau(rows, list(pivots), n)
    # artificials occupy columns n .. n + len(negative) - 1
    width = n + len(negative)
    basis = list(pivots)
    full = []
    for i, row in enumerate(rows):
        coeffs, rhs = row[:n], row[-1]
        art = [ZERO] * len(negative)
        if rhs < 0:
            coeffs = [-x for x in coeffs]
            rhs = -rhs
            slot = negative.index(i)
            art[slot] = ONE
            basis[i] = n + slot
        full.append(coeffs + art + [rhs])
    t = _Tableau(full, basis, width)
    cost = [ZERO] * n + [ONE] * len(negative)
    t.run(cost, width)
    if sum((t.rows[i][-1] for i, bcol in enumerate(t.basis) if bcol >= n), ZERO) != 0:
        return None
    for i, bcol in enumerate(t.basis):
        if bcol >= n:
            j = next(k for k in range(n) if t.rows[i][k] and k not in t.basis)
            t.pivot(i, j)
    t.rows = [row[:n] + [row[-1]] for row in t.rows]
    t.ncols = n
    return t


def _optimize(start: _Tableau, c: Sequence[Fraction], sense: Sense) -> LPSolution:
    t = start.copy()
    cost = [Fraction(x) for x in c]
    if sense is Sense.MAX:
        cost = [-x for x in cost]
    status = t.run(cost, t.ncols)
    if status is not Status.OPTIMAL:
        return LPSolution(status, basis=list(t.basis), pivots=t.pivots)
    x = t.point(t.ncols)
    value = sum((ci * xi for ci, xi in zip(c, x) if ci), ZERO)
    return LPSolution(Status.OPTIMAL, value, x, list(t.basis), t.pivots)


def solve_lp(p: LPProblem) -> LPSolution:
    start = _feasible_tableau(p.A, p.b)
    if start is None:
        return LPSolution(Status.INFEASIBLE)
    sol = _optimize(start, p.c, p.sense)
    if sol.status is Status.OPTIMAL:
        assert p.A.apply(sol.point) == [Fraction(x) for x in p.b]
    return sol


def parse_cost(source: str, g: Graph, h: Graph) -> dict[PVertex, Fraction]:
    """Read ``cost <u> <v> <rational>`` lines; omitted pairs cost 0."""
    out: dict[PVertex, Fraction] = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "cost":
            raise ParseError("expected 'cost <u> <v> <rational>'", lineno)
        try:
            key = (g.index(parts[1]), h.index(parts[2]))
        except UnknownVertex as exc:
            raise UnknownVertex(str(exc), lineno) from None
        if key in out:
            raise ParseError(f"cost for {parts[1]} {parts[2]} listed twice", lineno)
        out[key] = parse_rational(parts[3], lineno)
    return check_cost(g, h, out)


def cost_to_text(g: Graph, h: Graph, cost: Mapping[PVertex, Fraction]) -> str:
    return "".join(f"cost {g.labels[u]} {h.labels[v]} {c}\n" for (u, v), c in sorted(cost.items()) if c)


# -- joining polytope ----------------------------------------------------------------

class JoiningPolytope:
    """Constraints of the joining polytope with a reusable feasible basis."""

    def __init__(self, g: Graph, h: Graph, budget: int | None = None) -> None:
        budget = lp_budget() if budget is None else budget
        self.g, self.h = g, h
        self.system = build_J(g, h)
        n = len(self.system.index)
        if n > budget:
            raise SearchBudgetExceeded(f"{n} joining variables exceed the LP budget {budget}")
        self.A = self.system.matrix.stack(RMatrix([[ONE] * n], n))
        self.b = [ZERO] * self.system.matrix.rows + [ONE]
        start = _feasible_tableau(self.A, self.b)
        assert start is not None, "the product joining is always feasible"
        self._start = start

    @property
    def nvars(self) -> int:
        return len(self.system.index)

    def optimize(self, c: Sequence[Fraction], sense: Sense = Sense.MIN) -> LPSolution:
        sol = _optimize(self._start, c, sense)
        assert sol.status is Status.OPTIMAL
        return sol

    def degree_objective(self, u: int, v: int) -> list[Fraction]:
        return [ONE if key[0] == (u, v) else ZERO for key in self.system.index.keys]

    def cost_objective(self, cost: Mapping[PVertex, Fraction]) -> list[Fraction]:
        return [cost.get(key[0], ZERO) for key in self.system.index.keys]

    def joining(self, point: Sequence[Fraction]) -> WeightJoining:
        return WeightJoining.from_vector(self.g, self.h, self.system.index, point)


def ogj_value(g: Graph, h: Graph, c: Mapping[PVertex, Fraction]) -> tuple[Fraction, WeightJoining]:
    """Minimum degree-weighted cost over all joinings, with a minimizing joining."""
    cost = check_cost(g, h, c)
    poly = JoiningPolytope(g, h)
    sol = poly.optimize(poly.cost_objective(cost))
    k = poly.joining(sol.point)
    assert validate_joining(k).valid
    return sol.value, k


class Target(Enum):
    GAMMA = "gamma"
    DEGREE = "degree"


def coordinate_ranges(g: Graph, h: Graph, target: Target | str = Target.GAMMA, budget: int | None = None) -> dict:
    """Per-coordinate (min, max) over the joining polytope."""
    target = Target(target)
    poly = JoiningPolytope(g, h, budget)
    out: dict = {}
    if target is Target.GAMMA:
        for j, key in enumerate(poly.system.index.keys):
            e = [ZERO] * poly.nvars
            e[j] = ONE
            out[key] = (poly.optimize(e).value, poly.optimize(e, Sense.MAX).value)
    else:
        p, q = g.degree, h.degree
        for u in range(g.n):
            for v in range(h.n):
                if not p[u] * q[v]:
                    out[(u, v)] = (ZERO, ZERO)
                    continue
                obj = poly.degree_objective(u, v)
                out[(u, v)] = (poly.optimize(obj).value, poly.optimize(obj, Sense.MAX).value)
    return out


def strong_via_lp(g: Graph, h: Graph, budget: int | None = None) -> bool:
    return all(lo == hi for lo, hi in coordinate_ranges(g, h, Target.GAMMA, budget).values())


def weak_via_lp(g: Graph, h: Graph, budget: int | None = None) -> bool:
    p, q = g.degree, h.degree
    ranges = coordinate_ranges(g, h, Target.DEGREE, budget)
    return all(lo == hi == p[u] * q[v] for (u, v), (lo, hi) in ranges.items())


def c_disjoint_via_lp(g: Graph, h: Graph, c: Mapping[PVertex, Fraction]) -> bool:
    cost = check_cost(g, h, c)
    value, _ = ogj_value(g, h, cost)
    return value == product_cost(g, h, cost)

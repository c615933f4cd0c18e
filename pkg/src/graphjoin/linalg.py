"""Exact rational linear algebra and univariate polynomials.

Matrices are stored densely as lists of ``Fraction`` rows.  Elimination is
done on integer-scaled rows (each row is kept primitive), which avoids the
per-entry gcd cost of ``Fraction`` arithmetic and only touches nonzero
entries.  Results are converted back to ``Fraction`` at the end.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ShapeError, UndefinedGcd

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class RMatrix:
    """Dense matrix of rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None) -> None:
        self.data = [[Q(x) for x in row] for row in data]
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        for row in self.data:
            if len(row) != cols:
                raise ShapeError("ragged matrix rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RMatrix:
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> RMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, values: Sequence) -> RMatrix:
        return cls([[v] for v in values], 1)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RMatrix) and self.cols == other.cols and self.data == other.data

    def __repr__(self) -> str:
        return f"RMatrix({[[str(x) for x in row] for row in self.data]})"

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> list[Fraction]:
        return list(self.data[i])

    def col(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.data]

    def transpose(self) -> RMatrix:
        return RMatrix([self.col(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: RMatrix) -> RMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for row in self.data:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([sum((a * c[k] for k, a in nz), ZERO) for c in ocols])
        return RMatrix(out, other.cols)

    def apply(self, v: Sequence) -> list[Fraction]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ShapeError("vector length does not match column count")
        return [sum((a * v[k] for k, a in enumerate(row) if a), ZERO) for row in self.data]

    def stack(self, other: RMatrix) -> RMatrix:
        if self.cols != other.cols:
            raise ShapeError("column counts differ")
        return RMatrix(self.data + other.data, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols


# -- sparse integer elimination ---------------------------------------------

def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _int_row(row: Sequence[Fraction]) -> dict[int, int]:
    nz = [(j, Q(x)) for j, x in enumerate(row) if x]
    if not nz:
        return {}
    den = lcm(*(x.denominator for _, x in nz))
    return _primitive({j: x.numerator * (den // x.denominator) for j, x in nz})


def _insert(basis: dict[int, dict[int, int]], row: dict[int, int]) -> bool:
    """Reduce ``row`` against ``basis``; store it if independent."""
    while row:
        c = min(row)
        piv = basis.get(c)
        if piv is None:
            basis[c] = row
            return True
        a, b = piv[c], row[c]
        new = {k: a * v for k, v in row.items()}
        for k, v in piv.items():
            s = new.get(k, 0) - b * v
            if s:
                new[k] = s
            else:
                new.pop(k, None)
        row = _primitive(new) if new else new
    return False


def _echelon(rows: Iterable[Sequence[Fraction]]) -> dict[int, dict[int, int]]:
    basis: dict[int, dict[int, int]] = {}
    for raw in rows:
        _insert(basis, _int_row(raw))
    return basis


def _reduced(basis: dict[int, dict[int, int]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Back-substitute an echelon basis into reduced form."""
    done: dict[int, dict[int, Fraction]] = {}
    for c in sorted(basis, reverse=True):
        row = basis[c]
        lead = row[c]
        red = {k: Q(v, lead) for k, v in row.items()}
        for p in [k for k in red if k != c and k in done]:
            f = red.pop(p)
            for k, v in done[p].items():
                if k == p:
                    continue
                s = red.get(k, ZERO) - f * v
                if s:
                    red[k] = s
                else:
                    red.pop(k, None)
        done[c] = red
    return [(c, done[c]) for c in sorted(done)]


def rref(m: RMatrix) -> tuple[RMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    reduced = _reduced(_echelon(m.data))
    out = RMatrix.zeros(m.rows, m.cols)
    for i, (_, row) in enumerate(reduced):
        for k, v in row.items():
            out.data[i][k] = v
    return out, [c for c, _ in reduced]


def rank(m: RMatrix) -> int:
    return len(_echelon(m.data))


def null_space(m: RMatrix) -> list[RMatrix]:
    """Basis of the right null space, one column vector per free variable."""
    reduced = _reduced(_echelon(m.data))
    pivots = {c for c, _ in reduced}
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for c, row in reduced:
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(RMatrix.column(v))
    assert len(pivots) + len(basis) == m.cols
    return basis


class Echelon:
    """Row space grown incrementally, for repeated rank-increase tests."""

    def __init__(self, rows: Iterable[Sequence[Fraction]] = ()) -> None:
        self._basis = _echelon(rows)

    @property
    def rank(self) -> int:
        return len(self._basis)

    def contains(self, row: Sequence[Fraction]) -> bool:
        return not _insert(dict(self._basis), _int_row(row))

    def add(self, row: Sequence[Fraction]) -> bool:
        return _insert(self._basis, _int_row(row))


# -- polynomials ------------------------------------------------------------

class RPoly:
    """Univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()) -> None:
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x_minus(cls, a) -> RPoly:
        return cls([-Q(a), ONE])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def monic(self) -> RPoly:
        if self.is_zero():
            return self
        lc = self.lead
        return RPoly(c / lc for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __mul__(self, other: RPoly) -> RPoly:
        if self.is_zero() or other.is_zero():
            return RPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RPoly(out)

    def _padded(self, other: RPoly) -> zip:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return zip(a, b)

    def __add__(self, other: RPoly) -> RPoly:
        return RPoly(x + y for x, y in self._padded(other))

    def __sub__(self, other: RPoly) -> RPoly:
        return RPoly(x - y for x, y in self._padded(other))

    def __repr__(self) -> str:
        return f"RPoly({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                xp = "x" if k == 1 else f"x^{k}"
                body = xp if mag == 1 else f"{mag}*{xp}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def eval_poly(p: RPoly, x) -> Fraction:
    acc = ZERO
    x = Q(x)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_divmod(a: RPoly, b: RPoly) -> tuple[RPoly, RPoly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    quot = [ZERO] * max(len(rem) - len(b.coeffs) + 1, 0)
    lb = b.lead
    db = b.degree
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        f = c / lb
        quot[k - db] = f
        for i, bc in enumerate(b.coeffs):
            rem[k - db + i] -= f * bc
    return RPoly(quot), RPoly(rem[:db] if db > 0 else [])


def poly_gcd(a: RPoly, b: RPoly) -> RPoly:
    """Monic gcd by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise UndefinedGcd("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1].monic()
    return a.monic()


def char_poly(m: RMatrix) -> RPoly:
    """Monic characteristic polynomial det(xI - m) by Faddeev-LeVerrier."""
    if not m.is_square():
        raise ShapeError(f"characteristic polynomial needs a square matrix, got {m.shape}")
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = RMatrix.zeros(n, n)
    for k in range(1, n + 1):
        shifted = RMatrix(mk.data, n)
        for i in range(n):
            shifted.data[i][i] += coeffs[n - k + 1]
        mk = m @ shifted
        trace = sum((mk.data[i][i] for i in range(n)), ZERO)
        coeffs[n - k] = -trace / k
    return RPoly(coeffs)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: RPoly) -> tuple[dict[Fraction, int], RPoly]:
    """Rational roots with multiplicity, and the cofactor with no rational roots."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every number as a root")
    roots: dict[Fraction, int] = {}
    rest = p.monic()
    while rest.degree >= 1 and rest.coeffs[0] == 0:
        roots[ZERO] = roots.get(ZERO, 0) + 1
        rest = RPoly(rest.coeffs[1:])
    if rest.degree < 1:
        return roots, rest
    den = lcm(*(c.denominator for c in rest.coeffs))
    ints = [int(c * den) for c in rest.coeffs]
    candidates = sorted({Q(s * a, b) for a in _divisors(ints[0]) for b in _divisors(ints[-1]) for s in (1, -1)})
    for r in candidates:
        while rest.degree >= 1 and eval_poly(rest, r) == 0:
            roots[r] = roots.get(r, 0) + 1
            rest = poly_divmod(rest, RPoly.x_minus(r))[0]
    return roots, rest

"""Exact rational linear algebra and one quadratic extension field.

Everything here works over `fractions.Fraction`; no floats anywhere.
Matrices are immutable tuples of tuples of Fraction.  The two positive
semidefiniteness routines (pivoted LDL^T and the characteristic-polynomial
sign rule) are deliberately independent of each other so they can
cross-check one another.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


# --- rational parsing / formatting -------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (optional leading minus on p only) exactly."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        num = num.strip()
        den = den.strip()
        if den.startswith(("-", "+")):
            raise ValueError(f"denominator must be unsigned: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Inverse of parse_rational: "p/q", or "p" when the value is integral."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# --- matrices -----------------------------------------------------------------

def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    """Freeze a rectangular grid of Fraction-convertible entries."""
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("ragged rows in matrix")
    return out


def matrix_from_strings(rows: Sequence[Sequence[str]]) -> Matrix:
    return as_matrix([[parse_rational(x) for x in row] for row in rows])


def matrix_to_strings(m: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m]


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def is_square(m: Matrix) -> bool:
    return all(len(row) == len(m) for row in m)


def is_symmetric(m: Matrix) -> bool:
    if not is_square(m):
        return False
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def _require_symmetric(m: Matrix, what: str) -> None:
    if not is_square(m):
        raise ValueError(f"{what} requires a square matrix")
    if not is_symmetric(m):
        raise ValueError(f"{what} requires a symmetric matrix")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError("dimension mismatch in matrix product")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m: Matrix, v: Sequence) -> tuple:
    if len(m[0]) != len(v):
        raise ValueError("dimension mismatch in matrix-vector product")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


# --- characteristic polynomial -------------------------------------------------

def char_poly(m: Matrix) -> tuple[Fraction, ...]:
    """Coefficients c_0..c_n (lowest degree first) of det(xI - M), c_n = 1.

    Faddeev-LeVerrier recurrence, exact over the rationals.
    """
    if not is_square(m):
        raise ValueError("char_poly requires a square matrix")
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    aux = m
    for k in range(1, n + 1):
        ck = -sum(aux[i][i] for i in range(n)) / k
        coeffs[n - k] = ck
        if k < n:
            shifted = tuple(
                tuple(aux[i][j] + (ck if i == j else 0) for j in range(n))
                for i in range(n)
            )
            aux = mat_mul(m, shifted)
    return tuple(coeffs)


def format_char_poly(coeffs: Sequence[Fraction], var: str = "x") -> str:
    """Render highest degree first, e.g. "x^4 - 35/12 x^3"."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = format_rational(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{format_rational(mag)} {power}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def psd_by_charpoly(m: Matrix) -> bool:
    """Sign-rule PSD test: M >= 0 iff (-1)^(n-k) c_k >= 0 for all k.

    Valid for symmetric matrices (real spectrum); independent of is_psd.
    """
    _require_symmetric(m, "psd_by_charpoly")
    coeffs = char_poly(m)
    n = len(m)
    return all((-1) ** (n - k) * coeffs[k] >= 0 for k in range(n + 1))


# --- exact PSD decision via pivoted LDL^T ---------------------------------------

@dataclass(frozen=True)
class PsdResult:
    """Outcome of the exact LDL^T test.

    psd          -- the decision
    pivots       -- the nonnegative pivots produced (evidence when psd)
    permutation  -- pivot order: permutation[k] = original index used at step k
    witness      -- when not psd, a vector v with v^T M v < 0
    """

    psd: bool
    pivots: tuple[Fraction, ...]
    permutation: tuple[int, ...]
    witness: tuple[Fraction, ...] | None

    def __bool__(self) -> bool:
        return self.psd


def quadratic_form(m: Matrix, v: Sequence[Fraction]) -> Fraction:
    return sum(v[i] * m[i][j] * v[j] for i in range(len(m)) for j in range(len(m)))


def is_psd(m: Matrix) -> PsdResult:
    """Decide M >= 0 exactly by LDL^T with symmetric (diagonal) pivoting.

    At each step the largest remaining diagonal entry is pivoted; a negative
    diagonal, or a zero diagonal whose row is not entirely zero, yields an
    explicit witness vector with a strictly negative quadratic form.
    """
    _require_symmetric(m, "is_psd")
    n = len(m)
    s = [list(row) for row in m]        # shrinking Schur complement, permuted
    perm = list(range(n))               # perm[k] = original index at slot k
    cols: list[list[Fraction]] = []     # cols[i][j-i-1] = L[j][i] in slot space
    pivots: list[Fraction] = []

    def witness_from(y: list[Fraction]) -> PsdResult:
        # y^T S y < 0 in the residual block; pull (0,...,0, y) back through
        # L^T (back substitution), then undo the slot permutation.
        k = len(pivots)
        v = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            if i >= k:
                v[i] = y[i - k]
            else:
                v[i] = -sum(cols[i][j - i - 1] * v[j] for j in range(i + 1, n))
        result = [Fraction(0)] * n
        for slot, orig in enumerate(perm):
            result[orig] = v[slot]
        vec = tuple(result)
        assert quadratic_form(m, vec) < 0
        return PsdResult(False, tuple(pivots), tuple(perm), vec)

    while s:
        r = len(s)
        k = len(pivots)
        neg = next((i for i in range(r) if s[i][i] < 0), None)
        if neg is not None:
            y = [Fraction(0)] * r
            y[neg] = Fraction(1)
            return witness_from(y)
        best = max(range(r), key=lambda i: s[i][i])
        if s[best][best] == 0:
            # all remaining diagonals are zero: PSD iff the block is zero
            bad = next(
                ((i, j) for i in range(r) for j in range(r) if i != j and s[i][j] != 0),
                None,
            )
            if bad is None:
                break
            i, j = bad
            y = [Fraction(0)] * r
            y[i] = Fraction(-1) / s[i][j]       # y^T S y = 2 t s_ij = -2
            y[j] = Fraction(1)
            return witness_from(y)
        if best != 0:
            lo, hi = k, k + best
            perm[lo], perm[hi] = perm[hi], perm[lo]
            for prev_i, prev in enumerate(cols):
                a, b = lo - prev_i - 1, hi - prev_i - 1
                prev[a], prev[b] = prev[b], prev[a]
            s[0], s[best] = s[best], s[0]
            for row in s:
                row[0], row[best] = row[best], row[0]
        pivot = s[0][0]
        col = [s[i][0] / pivot for i in range(1, r)]
        cols.append(col)
        pivots.append(pivot)
        s = [
            [s[i][j] - pivot * col[i - 1] * col[j - 1] for j in range(1, r)]
            for i in range(1, r)
        ]
    return PsdResult(True, tuple(pivots), tuple(perm), None)


def rank1_check(m: Matrix, scale: Fraction, v: Sequence[Fraction]) -> bool:
    """True iff M equals scale * v v^T entrywise."""
    if len(m) != len(v) or any(len(row) != len(v) for row in m):
        raise ValueError("dimension mismatch in rank1_check")
    return all(
        m[i][j] == scale * v[i] * v[j]
        for i in range(len(v))
        for j in range(len(v))
    )


# --- quadratic extension Q(sqrt(d)) ---------------------------------------------

def _is_square_free(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadraticValue:
    """Exact element a + b*sqrt(d) of Q(sqrt(d)), d a square-free positive int."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        if not _is_square_free(self.d):
            raise ValueError(f"radicand must be a square-free positive integer: {self.d}")

    @staticmethod
    def of(a, b, d: int) -> "QuadraticValue":
        return QuadraticValue(Fraction(a), Fraction(b), d)

    def _check(self, other: "QuadraticValue") -> None:
        if self.d != other.d:
            raise ValueError(f"mixed radicands: sqrt({self.d}) vs sqrt({other.d})")

    def __add__(self, other):
        if isinstance(other, QuadraticValue):
            self._check(other)
            return QuadraticValue(self.a + other.a, self.b + other.b, self.d)
        return QuadraticValue(self.a + Fraction(other), self.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticValue(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadraticValue) else QuadraticValue(-Fraction(other), Fraction(0), self.d))

    def __mul__(self, other):
        if isinstance(other, QuadraticValue):
            self._check(other)
            return QuadraticValue(
                self.a * other.a + self.b * other.b * self.d,
                self.a * other.b + self.b * other.a,
                self.d,
            )
        other = Fraction(other)
        return QuadraticValue(self.a * other, self.b * other, self.d)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self):
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.d})"


def eigencheck(
    m: Matrix, v: Sequence[QuadraticValue], lam: QuadraticValue
) -> bool:
    """True iff M v = lam v exactly in Q(sqrt(d)); all radicands must agree."""
    _require_symmetric(m, "eigencheck")
    if len(v) != len(m):
        raise ValueError("dimension mismatch in eigencheck")
    d = lam.d
    if any(x.d != d for x in v):
        raise ValueError("mixed radicands between eigenvector and eigenvalue")
    for i in range(len(m)):
        acc = QuadraticValue.of(0, 0, d)
        for j in range(len(m)):
            acc = acc + v[j] * m[i][j]
        if not (acc - lam * v[i]).is_zero():
            return False
    return True


def eval_poly_quadratic(coeffs: Sequence[Fraction], x: QuadraticValue) -> QuadraticValue:
    """Evaluate a rational polynomial (lowest degree first) at x in Q(sqrt(d))."""
    acc = QuadraticValue.of(0, 0, x.d)
    for c in reversed(coeffs):
        acc = acc * x + QuadraticValue.of(c, 0, x.d)
    return acc

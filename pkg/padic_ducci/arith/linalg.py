"""
Exact rational vectors and square matrices.

Both are immutable tuples of ``Fraction``; every operation allocates a
fresh result. Dimension errors raise DimensionMismatchError.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Tuple

from padic_ducci.arith.padic import Scalar, as_rational, format_rational
from padic_ducci.arith.poly import RationalPolynomial
from padic_ducci.errors import DimensionMismatchError


@dataclass(frozen=True)
class RationalVector:
    entries: Tuple[Fraction, ...]

    def __init__(self, entries: Iterable[Scalar]):
        values = tuple(as_rational(e) for e in entries)
        if not values:
            raise DimensionMismatchError("vector must have length n >= 1", field="seed")
        object.__setattr__(self, "entries", values)

    @classmethod
    def zeros(cls, n: int) -> "RationalVector":
        return cls([0] * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def to_strings(self) -> list:
        return [format_rational(e) for e in self.entries]


@dataclass(frozen=True)
class RationalMatrix:
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        grid = tuple(tuple(as_rational(e) for e in row) for row in rows)
        n = len(grid)
        if n == 0:
            raise DimensionMismatchError("matrix must be n x n with n >= 1", field="matrix")
        for row in grid:
            if len(row) != n:
                raise DimensionMismatchError("matrix must be square", field="matrix")
        object.__setattr__(self, "rows", grid)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> Iterator[Fraction]:
        for row in self.rows:
            yield from row

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        _check_same(self, other)
        return RationalMatrix(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        _check_same(self, other)
        return RationalMatrix(
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        )

    def scale(self, c: Scalar) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix([c * a for a in row] for row in self.rows)

    def __matmul__(self, other):
        if isinstance(other, RationalVector):
            return mat_vec_mul(self, other)
        return mat_mul(self, other)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def diagonal_entries(self) -> Tuple[Fraction, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_diagonal(self) -> bool:
        return all(
            self.rows[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j
        )

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(i))

    def is_permutation(self) -> bool:
        for row in self.rows:
            if sorted(row) != [0] * (self.n - 1) + [1]:
                return False
        for j in range(self.n):
            if sorted(self.rows[i][j] for i in range(self.n)) != [0] * (self.n - 1) + [1]:
                return False
        return True

    def to_strings(self) -> list:
        return [[format_rational(e) for e in row] for row in self.rows]


def _check_same(a: RationalMatrix, b: RationalMatrix):
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n}x{a.n} vs {b.n}x{b.n}", field="matrix")


def mat_vec_mul(a: RationalMatrix, x: RationalVector) -> RationalVector:
    """(A x)_i = sum_j a_ij x_j"""
    if a.n != len(x):
        raise DimensionMismatchError(
            f"dimension mismatch: {a.n}x{a.n} matrix and length {len(x)} vector", field="seed"
        )
    return RationalVector(
        sum((aij * xj for aij, xj in zip(row, x.entries) if aij), Fraction(0))
        for row in a.rows
    )


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    _check_same(a, b)
    cols = list(zip(*b.rows))
    return RationalMatrix(
        [sum((x * y for x, y in zip(row, col) if x), Fraction(0)) for col in cols]
        for row in a.rows
    )


def mat_pow(a: RationalMatrix, m: int) -> RationalMatrix:
    """A^m by repeated squaring; A^0 = I"""
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    result = RationalMatrix.identity(a.n)
    base = a
    while m:
        if m & 1:
            result = mat_mul(result, base)
        m >>= 1
        if m:
            base = mat_mul(base, base)
    return result


def char_poly(a: RationalMatrix) -> RationalPolynomial:
    """Monic det(tI - A) by the Faddeev-LeVerrier recursion.

    With M_0 = 0 and c_n = 1:
        M_k = A M_{k-1} + c_{n-k+1} I
        c_{n-k} = -tr(A M_k) / k
    Only divisions by the integers 1..n occur.
    """
    n = a.n
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = RationalMatrix.identity(n)
    m = RationalMatrix.zeros(n)
    for k in range(1, n + 1):
        m = mat_mul(a, m) + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -mat_mul(a, m).trace() / k
    return RationalPolynomial(coeffs)


def determinant(a: RationalMatrix) -> Fraction:
    """det A = (-1)^n chi_A(0)"""
    chi = char_poly(a)
    sign = -1 if a.n % 2 else 1
    return sign * chi(0)


def evaluate_at_matrix(f: RationalPolynomial, a: RationalMatrix) -> RationalMatrix:
    """f(A) by Horner's rule"""
    ident = RationalMatrix.identity(a.n)
    acc = RationalMatrix.zeros(a.n)
    for c in reversed(f.coeffs):
        acc = mat_mul(acc, a) + ident.scale(c)
    return acc

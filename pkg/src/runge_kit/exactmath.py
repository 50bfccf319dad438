"""Exact rational arithmetic and fraction-free integer linear algebra.

Everything here works over ``int`` and :class:`fractions.Fraction`; no floating
point is used anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "IntMatrix",
    "ExponentVector",
    "RankDeficiencyError",
    "bernoulli2",
    "ell",
    "bareiss_det",
    "rank",
    "pivot_columns",
    "positive_combination",
    "lemma_budget_holds",
]

Rational = Fraction


class RankDeficiencyError(ValueError):
    """Raised when a matrix does not have the row rank an operation requires."""

    def __init__(self, expected: int, found: int):
        super().__init__(f"matrix has rank {found}, expected full row rank {expected}")
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([[r[j] for j in idx] for r in self.tolist()], len(idx))

    def max_abs(self) -> int:
        return max((abs(x) for x in self.entries), default=0)

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))


@dataclass(frozen=True)
class ExponentVector:
    entries: tuple[int, ...]

    @property
    def l1_norm(self) -> int:
        return sum(abs(x) for x in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix.from_rows(M)


def bernoulli2(x: Fraction) -> Fraction:
    """Second Bernoulli polynomial ``x**2 - x + 1/6`` on ``[0, 1)``."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"bernoulli2 expects 0 <= x < 1, got {x}")
    return x * x - x + Fraction(1, 6)


def ell(a) -> Fraction:
    """Cusp-order datum ``B2(frac(a1)) / 2`` of a nonzero label.

    ``a`` is a :class:`runge_kit.gl2.UnitLabel` or a pair ``(a1, a2)`` of
    rationals. Only the first coordinate matters.
    """
    if hasattr(a, "as_fractions"):
        a1, a2 = a.as_fractions()
    else:
        a1, a2 = (Fraction(t) for t in a)
    if a1 % 1 == 0 and a2 % 1 == 0:
        raise ValueError("ell is undefined for the zero label")
    return bernoulli2(a1 % 1) / 2


def _bareiss(rows: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row reduction in place.

    Returns the reduced rows, pivot columns, and the sign of the row permutation.
    All intermediate entries are minors of the input, so they stay integral.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = 1
    sign = 1
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            rr = rows[r]
            for j in range(c + 1, n):
                ri[j] = (piv * ri[j] - f * rr[j]) // prev
            ri[c] = 0
        # entries left of c in rows below are already 0
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots, sign


def bareiss_det(M) -> int:
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError(f"determinant needs a square matrix, got {M.rows}x{M.cols}")
    n = M.rows
    if n == 0:
        return 1
    rows, pivots, sign = _bareiss(M.tolist())
    if len(pivots) < n:
        return 0
    return sign * rows[n - 1][n - 1]


def rank(M) -> int:
    M = _as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_bareiss(M.tolist())[1])


def pivot_columns(M) -> list[int]:
    """Indices of the lexicographically first set of linearly independent columns.

    Greedy left-to-right selection is optimal for the column matroid, so this is
    also the first nonsingular column set in ``itertools.combinations`` order
    whenever the matrix has full row rank.
    """
    M = _as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        return []
    return _bareiss(M.tolist())[1]


def _cramer_numerators(S: IntMatrix) -> tuple[int, list[int]]:
    """Return ``(d, [det S_k])`` where ``S_k`` has column k replaced by ones."""
    n = S.rows
    if n <= 6:
        d = bareiss_det(S)
        nums = []
        for k in range(n):
            rows = S.tolist()
            for r in rows:
                r[k] = 1
            nums.append(bareiss_det(IntMatrix.from_rows(rows)))
        return d, nums
    # Large systems: one exact solve instead of n determinants. d * x_k = det S_k.
    aug = [list(S.row(i)) + [1] for i in range(n)]
    rows, pivots, sign = _bareiss(aug)
    d = sign * rows[n - 1][n - 1]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    nums = []
    for xi in x:
        v = xi * d
        assert v.denominator == 1
        nums.append(int(v))
    return d, nums


def lemma_budget_holds(l1: int, s: int, A: int) -> bool:
    """Exact test of ``l1 <= s**(s/2 + 1) * A**(s - 1)``."""
    if s < 1:
        raise ValueError("s must be positive")
    if l1 < 0:
        return False
    if s % 2 == 0:
        return l1 <= s ** (s // 2 + 1) * A ** (s - 1)
    # square both sides to stay in the integers
    return l1 * l1 <= s ** (s + 2) * A ** (2 * s - 2)


def positive_combination(M) -> ExponentVector:
    """Integer ``b`` with every entry of ``M @ b`` strictly positive.

    ``M`` must have full row rank ``s``. The first nonsingular ``s x s`` column
    block is selected, ``b`` on that block is the vector of signed cofactor
    determinants with the all-ones column substituted, so ``M @ b == |d| * ones``.
    Remaining coordinates are 0. ``||b||_1 <= s**(s/2+1) * A**(s-1)`` by
    Hadamard's inequality, with ``A`` the largest absolute entry.
    """
    M = _as_matrix(M)
    s = M.rows
    if s == 0:
        return ExponentVector((0,) * M.cols)
    piv = pivot_columns(M)
    if len(piv) < s:
        raise RankDeficiencyError(s, len(piv))
    S = M.select_columns(piv)
    d, nums = _cramer_numerators(S)
    sgn = 1 if d > 0 else -1
    b = [0] * M.cols
    for j, v in zip(piv, nums):
        b[j] = sgn * v
    return ExponentVector(tuple(b))

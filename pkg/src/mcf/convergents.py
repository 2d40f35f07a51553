"""Convergent numerators and denominators of a multidimensional continued fraction.

The table holds exact vectors (A_n^(1), ..., A_n^(m+1)) for n >= -m, built
from the order-(m+1) recurrence

    A_n^(i) = sum_{j=1}^{m} a_n^(j) A_{n-j}^(i)  +  A_{n-m-1}^(i)

with the standard initial rows.  The same data is independently available as
a product of step matrices whose first column reproduces row n.
Quotients may be arbitrary exact rationals; integer streams keep integer rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import _matrix
from .exactnum import parse_rational


class ZeroDenominatorError(ArithmeticError):
    """Requested convergent has A_n^(m+1) = 0."""


def _exactify(x):
    f = parse_rational(x)
    return int(f) if f.denominator == 1 else f


class ConvergentTable:
    """Append-only table of convergent vectors, rows indexed from -m.

    Extension mutates the (exclusively owned) table in place; rows already
    stored are never changed.
    """

    def __init__(self, m: int, first_quotients: Sequence):
        if m < 1:
            raise ValueError("dimension must be >= 1")
        a0 = [_exactify(q) for q in first_quotients]
        if len(a0) != m:
            raise ValueError(f"expected {m} first quotients, got {len(a0)}")
        self.m = m
        # rows -m .. -1: standard basis vectors; row 0: (a_0^(1),...,a_0^(m), 1)
        self._rows: list[tuple] = []
        for j in range(m, 0, -1):
            self._rows.append(tuple(1 if i == j else 0 for i in range(1, m + 2)))
        self._rows.append(tuple(a0 + [1]))
        self.quotients: list[tuple] = [tuple(a0)]

    @property
    def max_n(self) -> int:
        return len(self._rows) - 1 - self.m

    def row(self, n: int) -> tuple:
        if n < -self.m or n > self.max_n:
            raise IndexError(f"row {n} not in table (-{self.m}..{self.max_n})")
        return self._rows[n + self.m]

    def append(self, quotients: Sequence) -> "ConvergentTable":
        """Add the next row from the quotients a_n^(1..m); returns self."""
        a = [_exactify(q) for q in quotients]
        if len(a) != self.m:
            raise ValueError(f"expected {self.m} quotients, got {len(a)}")
        n = self.max_n + 1
        row = tuple(
            sum(a[j - 1] * self.row(n - j)[i] for j in range(1, self.m + 1))
            + self.row(n - self.m - 1)[i]
            for i in range(self.m + 1)
        )
        self._rows.append(row)
        self.quotients.append(tuple(a))
        return self

    def extend(self, quotient_rows: Sequence[Sequence]) -> "ConvergentTable":
        for q in quotient_rows:
            self.append(q)
        return self

    def convergent(self, n: int) -> tuple[Fraction, ...]:
        """(A_n^(1)/A_n^(m+1), ..., A_n^(m)/A_n^(m+1))."""
        row = self.row(n)
        denom = row[-1]
        if denom == 0:
            raise ZeroDenominatorError(f"A_{n}^({self.m + 1}) = 0")
        return tuple(Fraction(row[i], 1) / Fraction(denom, 1) for i in range(self.m))

    def __len__(self) -> int:
        return len(self._rows)

    @classmethod
    def from_quotients(cls, m: int, quotient_rows: Sequence[Sequence]) -> "ConvergentTable":
        if not quotient_rows:
            raise ValueError("need at least the n = 0 quotients")
        table = cls(m, quotient_rows[0])
        return table.extend(quotient_rows[1:])


def step_matrix(quotients: Sequence) -> _matrix.Matrix:
    """(m+1) x (m+1) factor: first column (a^(1)..a^(m), 1), then shifted identity."""
    a = [_exactify(q) for q in quotients]
    m = len(a)
    rows = []
    for i in range(m + 1):
        row = [0] * (m + 1)
        row[0] = a[i] if i < m else 1
        if i < m:
            row[i + 1] = 1
        rows.append(row)
    return _matrix.freeze(rows)


def matrix_table(quotient_prefix: Sequence[Sequence]) -> _matrix.Matrix:
    """Product of the step matrices of a quotient prefix, left to right.

    Column j (0-based) of the product is the convergent vector A_{n-j}.
    """
    if not quotient_prefix:
        raise ValueError("prefix must be nonempty")
    product = step_matrix(quotient_prefix[0])
    for q in quotient_prefix[1:]:
        product = _matrix.mat_mul(product, step_matrix(q))
    return product


def check_growth_bound(table: ConvergentTable, quotients: Sequence[Sequence] | None = None) -> bool:
    """Whether A_n^(i) >= prod_{j=1}^{n} a_j^(1) for every axis and 1 <= n <= max_n.

    Guaranteed for streams produced by the expansion of inputs with every
    a_0^(i) >= 1 (then all a_j^(1) >= 1 and a_j^(i) >= 0); for other streams
    this simply reports what holds.
    """
    history = table.quotients if quotients is None else [tuple(q) for q in quotients]
    bound = 1
    for n in range(1, table.max_n + 1):
        bound *= history[n][0]
        if any(table.row(n)[i] < bound for i in range(table.m + 1)):
            return False
    return True

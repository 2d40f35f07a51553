"""Linear recurrence sequences over exact rationals.

Covers representation and extension, minimal-order fitting from a prefix
(Berlekamp-Massey over Q), closure of characteristic polynomials under
term-wise sum and product, exact characteristic polynomials of matrices,
and an eventual-periodicity consistency check for integer sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _matrix
from .exactnum import parse_rational


class InsufficientDataError(ValueError):
    """The prefix is too short to attest a fit of the requested order."""


def _exactify(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial x^d + a_{d-1} x^{d-1} + ... + a_0, coefficients ascending."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")
        object.__setattr__(self, "coeffs", tuple(_exactify(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def recurrence_coeffs(self) -> tuple:
        """e_0..e_{d-1} such that s_{n+d} = sum_j e_j s_{n+j} for annihilated s."""
        return tuple(-c for c in self.coeffs[:-1])

    def companion(self) -> _matrix.Matrix:
        d = self.degree
        if d == 0:
            raise ValueError("constant polynomial has no companion matrix")
        rows = []
        for i in range(d):
            row = [0] * d
            if i + 1 < d:
                row[i + 1] = 1
            rows.append(row)
        for j in range(d):
            rows[d - 1][j] = -self.coeffs[j]
        return _matrix.freeze(rows)

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += Fraction(a) * Fraction(b)
        return CharPoly(tuple(out))

    def annihilates(self, seq: Sequence, start: int = 0) -> bool:
        """Whether sum_k coeffs[k] * seq[n+k] == 0 for every applicable n >= start."""
        d = self.degree
        return all(
            sum(self.coeffs[k] * Fraction(seq[n + k]) for k in range(d + 1)) == 0
            for n in range(start, len(seq) - d)
        )

    def divides(self, other: "CharPoly") -> bool:
        rem = [Fraction(c) for c in other.coeffs]
        div = [Fraction(c) for c in self.coeffs]
        while len(rem) >= len(div):
            factor = rem[-1] / div[-1]
            shift = len(rem) - len(div)
            for i, c in enumerate(div):
                rem[shift + i] -= factor * c
            while rem and rem[-1] == 0:
                rem.pop()
            if not rem:
                return True
        return not rem

    def evaluate_at_matrix(self, m: _matrix.Matrix) -> _matrix.Matrix:
        n = len(m)
        acc = _matrix.mat_scale(_matrix.identity(n), self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = _matrix.mat_add(_matrix.mat_mul(acc, m), _matrix.mat_scale(_matrix.identity(n), c))
        return acc


@dataclass(frozen=True)
class LinearRecurrence:
    """s_n = sum_{k=1}^{d} coeffs[k-1] * s_{n-k}, asserted for n >= offset.

    ``initial`` holds s_0 .. s_{offset-1}; offset >= order, and offset > order
    only when the recurrence kicks in late (e.g. after trailing-zero trimming
    of a fitted connection polynomial).
    """

    coeffs: tuple
    initial: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_exactify(c) for c in self.coeffs))
        object.__setattr__(self, "initial", tuple(_exactify(c) for c in self.initial))
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing recurrence coefficient must be nonzero")
        if len(self.initial) < len(self.coeffs):
            raise ValueError("need at least `order` initial terms")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def offset(self) -> int:
        return len(self.initial)

    def term(self, n: int):
        if n < 0:
            raise ValueError("index must be nonnegative")
        return self.terms(n + 1)[n]

    def terms(self, count: int) -> list:
        out = list(self.initial[:count])
        while len(out) < count:
            n = len(out)
            out.append(_exactify(sum(Fraction(c) * Fraction(out[n - k - 1]) for k, c in enumerate(self.coeffs))))
        return out

    def char_poly(self) -> CharPoly:
        coeffs = [-Fraction(c) for c in reversed(self.coeffs)] + [Fraction(1)]
        return CharPoly(tuple(coeffs))


def _berlekamp_massey(seq: Sequence[Fraction]) -> tuple[int, list[Fraction]]:
    """Minimal connection polynomial over Q.

    Returns (L, C) with C[0] = 1 and s_n + sum_{k=1}^{deg C} C[k] s_{n-k} = 0
    for all L <= n < len(seq).
    """
    c = [Fraction(1)]
    b = [Fraction(1)]
    length = 0
    gap = 1
    last_disc = Fraction(1)
    for n, s_n in enumerate(seq):
        disc = s_n + sum(c[k] * seq[n - k] for k in range(1, length + 1))
        if disc == 0:
            gap += 1
            continue
        adjustment = [Fraction(0)] * gap + [disc / last_disc * x for x in b]
        if 2 * length <= n:
            previous = list(c)
            c = [x - y for x, y in _pad_zip(c, adjustment)]
            b = previous
            length = n + 1 - length
            last_disc = disc
            gap = 1
        else:
            c = [x - y for x, y in _pad_zip(c, adjustment)]
            gap += 1
    return length, c


def _pad_zip(a: Sequence[Fraction], b: Sequence[Fraction]):
    n = max(len(a), len(b))
    zero = Fraction(0)
    return zip(
        list(a) + [zero] * (n - len(a)),
        list(b) + [zero] * (n - len(b)),
    )


def fit_minimal(prefix: Sequence, max_order: int) -> LinearRecurrence | None:
    """Minimal constant-coefficient recurrence reproducing the whole prefix.

    Requires len(prefix) >= 2 * max_order + 4 so the fit is attested on terms
    beyond those needed to determine it.  Returns None when no recurrence of
    order <= max_order fits.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    values = [Fraction(parse_rational(x)) for x in prefix]
    if len(values) < 2 * max_order + 4:
        raise InsufficientDataError(
            f"need at least {2 * max_order + 4} terms to attest order {max_order}, got {len(values)}"
        )
    length, connection = _berlekamp_massey(values)
    if length > max_order:
        return None
    coeffs = [-connection[k] if k < len(connection) else Fraction(0) for k in range(1, length + 1)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    # double-check against the full prefix, including the reserved tail
    for n in range(length, len(values)):
        if values[n] != sum(coeffs[k] * values[n - k - 1] for k in range(len(coeffs))):
            return None
    return LinearRecurrence(coeffs=tuple(coeffs), initial=tuple(values[:length]))


def sum_closure(p: CharPoly, q: CharPoly) -> CharPoly:
    """Characteristic polynomial annihilating term-wise sums: the product p*q."""
    return p * q


def product_closure(p: CharPoly, q: CharPoly) -> CharPoly:
    """Characteristic polynomial annihilating term-wise products.

    Computed exactly as the characteristic polynomial of the Kronecker product
    of the two companion matrices.
    """
    m = _matrix.kron(p.companion(), q.companion())
    return char_poly(m)


def char_poly(matrix) -> CharPoly:
    """Exact characteristic polynomial by the Faddeev-LeVerrier recursion."""
    m = _matrix.freeze(matrix)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    coeffs = [Fraction(1)]  # c_n, then c_{n-1}, ... down to c_0
    work = _matrix.identity(n)
    for k in range(1, n + 1):
        work = _matrix.mat_mul(m, work)
        c = -Fraction(_matrix.trace(work), k)
        coeffs.append(c)
        if k < n:
            work = _matrix.mat_add(work, _matrix.mat_scale(_matrix.identity(n), c))
    return CharPoly(tuple(reversed(coeffs)))


def eventually_periodic(seq: Sequence[int], min_repeats: int = 3) -> tuple[int, int] | None:
    """Minimal (preperiod, period) consistent with the observed prefix.

    The periodic tail must cover at least ``min_repeats`` full periods;
    a hit is evidence of periodicity on this prefix, not a proof.
    """
    n = len(seq)
    for period in range(1, n // min_repeats + 1):
        start = 0
        for i in range(n - period - 1, -1, -1):
            if seq[i] != seq[i + period]:
                start = i + 1
                break
        if n - start >= min_repeats * period:
            return start, period
    return None

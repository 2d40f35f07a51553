"""Periodic ternary representation of a cubic irrational, and the comparison
against the expansion the Jacobi-Perron iteration produces for the same pair.

For alpha a real root of x^3 - p x^2 - q x - r (irreducible) and a free
integer parameter z, a two-axis quotient scheme with preperiod 2 and period 3
represents the pair (r/alpha, alpha).  The quotients are exact rationals
built from the trace, determinant and second invariant (sum of principal 2x2
minors) of

    N = [[z, r, p*r], [0, q+z, p*q+r], [1, p, p^2+q+z]].

Convergents of that scheme are compared, with certified interval error
columns, against convergents of the floor-based expansion of (r/alpha, alpha)
computed exactly in Q(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _matrix, convergents, jacobi_perron, lrs
from .exactnum import AlgebraicReal, FieldElement, count_real_roots, eval_poly


class DegenerateSpecError(ValueError):
    """Parameters violate a divisor or irreducibility precondition."""


@dataclass(frozen=True)
class CubicSpec:
    p: int
    q: int
    r: int
    z: int

    def minpoly(self) -> tuple[int, int, int, int]:
        return (-self.r, -self.q, -self.p, 1)


def _is_irreducible_cubic(spec: CubicSpec) -> bool:
    # monic integer cubic: any rational root is an integer dividing r
    coeffs = spec.minpoly()
    rr = abs(spec.r)
    if rr == 0:
        return False
    d = 1
    divisors = set()
    while d * d <= rr:
        if rr % d == 0:
            divisors.update({d, -d, rr // d, -(rr // d)})
        d += 1
    return all(eval_poly(coeffs, Fraction(t)) != 0 for t in divisors)


@dataclass(frozen=True)
class NMatrix:
    matrix: _matrix.Matrix
    trace: int
    determinant: int
    second_invariant: int

    def char_poly(self) -> lrs.CharPoly:
        return lrs.char_poly(self.matrix)


def build_n_matrix(spec: CubicSpec) -> NMatrix:
    """N with its cached invariants; rejects the exact degeneracies."""
    if not _is_irreducible_cubic(spec):
        raise DegenerateSpecError(f"x^3 - {spec.p}x^2 - {spec.q}x - {spec.r} is reducible over Q")
    if spec.p * spec.q + spec.r == 0:
        raise DegenerateSpecError("p*q + r = 0 divides the quotients")
    p, q, r, z = spec.p, spec.q, spec.r, spec.z
    n = _matrix.freeze(
        [
            [z, r, p * r],
            [0, q + z, p * q + r],
            [1, p, p * p + q + z],
        ]
    )
    det = _matrix.det(n)
    if det == 0:
        raise DegenerateSpecError("det(N) = 0 divides the quotients")
    minors = (
        n[0][0] * n[1][1] - n[0][1] * n[1][0]
        + n[0][0] * n[2][2] - n[0][2] * n[2][0]
        + n[1][1] * n[2][2] - n[1][2] * n[2][1]
    )
    return NMatrix(matrix=n, trace=_matrix.trace(n), determinant=det, second_invariant=minors)


@dataclass(frozen=True)
class TernaryRep:
    """Two quotient streams, each with preperiod 2 and period 3; value (r/alpha, alpha)."""

    axis1_pre: tuple[Fraction, Fraction]
    axis1_period: tuple[Fraction, Fraction, Fraction]
    axis2_pre: tuple[Fraction, Fraction]
    axis2_period: tuple[Fraction, Fraction, Fraction]

    def quotient(self, axis: int, n: int) -> Fraction:
        pre = self.axis1_pre if axis == 1 else self.axis2_pre
        cycle = self.axis1_period if axis == 1 else self.axis2_period
        if n < 2:
            return pre[n]
        return cycle[(n - 2) % 3]

    def stream(self, count: int) -> list[tuple[Fraction, Fraction]]:
        return [(self.quotient(1, n), self.quotient(2, n)) for n in range(count)]


def build_representation(spec: CubicSpec) -> TernaryRep:
    nm = build_n_matrix(spec)
    p, q, r, z = spec.p, spec.q, spec.r, spec.z
    pqr = Fraction(p * q + r)
    tr, det, inv2 = nm.trace, nm.determinant, nm.second_invariant
    return TernaryRep(
        axis1_pre=(Fraction(z), Fraction(2 * z + p * p + q) / pqr),
        axis1_period=(pqr * tr / det, Fraction(tr), Fraction(tr) / pqr),
        axis2_pre=(Fraction(p), -Fraction(z * z + q * z + p * p * z - p * r) / pqr),
        axis2_period=(-Fraction(inv2, det), -pqr * inv2 / det, -Fraction(inv2) / pqr),
    )


def representation_table(rep: TernaryRep, n: int) -> convergents.ConvergentTable:
    return convergents.ConvergentTable.from_quotients(2, rep.stream(n + 1))


def evaluate_representation(rep: TernaryRep, n: int) -> tuple[Fraction, Fraction]:
    """The n-th convergent pair of the representation, exactly."""
    pair = representation_table(rep, n).convergent(n)
    return pair[0], pair[1]


def isolate_alpha(spec: CubicSpec) -> AlgebraicReal:
    """The real root of x^3 - p x^2 - q x - r (the largest, if there are three)."""
    coeffs = spec.minpoly()
    bound = 1 + max(abs(c) for c in coeffs[:-1])
    windows = [
        (Fraction(k), Fraction(k + 1))
        for k in range(-bound, bound)
        if count_real_roots(coeffs, Fraction(k), Fraction(k + 1)) > 0
    ]
    if not windows:
        raise DegenerateSpecError("no real root located (cannot happen for a cubic)")
    lo, hi = windows[-1]
    while count_real_roots(coeffs, lo, hi) > 1:
        mid = (lo + hi) / 2
        if count_real_roots(coeffs, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return AlgebraicReal(coeffs, (lo, hi))


def target_pair(spec: CubicSpec) -> tuple[FieldElement, FieldElement]:
    """(r/alpha, alpha) as exact elements of Q(alpha)."""
    gen = isolate_alpha(spec)
    alpha = gen.theta()
    return alpha.inverse() * spec.r, alpha


AbsBounds = tuple[Fraction, Fraction]


def _abs_bounds(delta: FieldElement, width: Fraction) -> AbsBounds:
    lo, hi = delta.enclosure(width)
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


@dataclass(frozen=True)
class ErrorRow:
    n: int
    bounds: tuple[AbsBounds, ...] | None  # None when the convergent denominator is zero


def error_columns(
    table: convergents.ConvergentTable,
    targets: Sequence[FieldElement],
    width: Fraction,
    up_to: int,
) -> list[ErrorRow]:
    rows = []
    for n in range(min(up_to, table.max_n) + 1):
        try:
            conv = table.convergent(n)
        except convergents.ZeroDenominatorError:
            rows.append(ErrorRow(n=n, bounds=None))
            continue
        bounds = tuple(_abs_bounds(t - c, width) for t, c in zip(targets, conv))
        rows.append(ErrorRow(n=n, bounds=bounds))
    return rows


@dataclass
class ComparisonReport:
    spec: CubicSpec
    depth: int
    n_matrix: NMatrix
    rep: TernaryRep
    rep_table: convergents.ConvergentTable
    rep_errors: list[ErrorRow]
    rep_fits: tuple[lrs.LinearRecurrence | None, ...]
    jacobi: jacobi_perron.Expansion
    jacobi_table: convergents.ConvergentTable | None
    jacobi_errors: list[ErrorRow]
    jacobi_fits: tuple[lrs.LinearRecurrence | None, ...]
    notes: list[str] = field(default_factory=list)


def _fit_axes(table: convergents.ConvergentTable, max_order: int):
    fits = []
    for i in range(table.m + 1):
        seq = [table.row(n)[i] for n in range(table.max_n + 1)]
        try:
            fits.append(lrs.fit_minimal(seq, max_order))
        except lrs.InsufficientDataError:
            fits.append(None)
    return tuple(fits)


def compare_with_jacobi(
    spec: CubicSpec,
    depth: int,
    fit_max_order: int = 12,
    precision: Fraction = Fraction(1, 10**30),
) -> ComparisonReport:
    """Side-by-side convergents of the periodic scheme and of the expansion."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rep = build_representation(spec)
    nm = build_n_matrix(spec)
    targets = target_pair(spec)
    notes = []

    attestable = max(1, (depth + 1 - 4) // 2)
    if attestable < fit_max_order:
        notes.append(
            f"depth {depth} attests fits only up to order {attestable}; "
            f"requested cap {fit_max_order} lowered"
        )
        fit_max_order = attestable

    rep_table = representation_table(rep, depth)
    rep_errors = error_columns(rep_table, targets, precision, depth)
    rep_fits = _fit_axes(rep_table, fit_max_order)

    expansion = jacobi_perron.expand(jacobi_perron.InputTuple(values=targets), max_iter=depth + 1)
    quotient_rows = expansion.quotients
    if isinstance(expansion.status, jacobi_perron.CycleDetected) and len(quotient_rows) <= depth:
        # the state repeated exactly, so the stream is periodic from there on
        quotient_rows = jacobi_perron.unrolled_quotients(expansion, depth + 1)
        notes.append(
            f"expansion cycled (preperiod {expansion.status.preperiod}, "
            f"cycle {expansion.status.cycle}); quotients unrolled to depth {depth}"
        )
    jacobi_table = None
    jacobi_errors: list[ErrorRow] = []
    jacobi_fits: tuple = (None, None, None)
    if quotient_rows:
        jacobi_table = convergents.ConvergentTable.from_quotients(2, quotient_rows)
        jacobi_errors = error_columns(jacobi_table, targets, precision, depth)
        jacobi_fits = _fit_axes(jacobi_table, fit_max_order)
    if isinstance(expansion.status, jacobi_perron.Terminated):
        notes.append(
            "expansion terminated exactly: the input pair is rational and the "
            "sides are not comparable at this depth"
        )
    return ComparisonReport(
        spec=spec,
        depth=depth,
        n_matrix=nm,
        rep=rep,
        rep_table=rep_table,
        rep_errors=rep_errors,
        rep_fits=rep_fits,
        jacobi=expansion,
        jacobi_table=jacobi_table,
        jacobi_errors=jacobi_errors,
        jacobi_fits=jacobi_fits,
        notes=notes,
    )

"""Periodic quotients <-> constant-coefficient recurrences, both directions.

Forward: an eventually periodic quotient stream yields u = lcm of the period
lengths and u cycle matrices M_i, each a product of u step-matrix factors
taken one period apart.  All M_i share one characteristic polynomial (they
are cyclic rotations PQ vs QP of the same factors), and Cayley-Hamilton
turns that polynomial into a constant-coefficient recurrence on every
convergent sequence A_n^(i), with index stride u.

Converse: fit minimal recurrences to the convergent sequences of an
expansion, then test the quotient streams for eventual periodicity.  On a
finite prefix the converse direction is a consistency check, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _matrix, convergents, jacobi_perron, lrs
from .jacobi_perron import CycleDetected, Expansion, InputTuple


class SharedPolyViolationError(ArithmeticError):
    """Cycle matrices disagreed on their characteristic polynomial."""


@dataclass(frozen=True)
class PeriodicSpec:
    """Per-axis preperiod and period quotients; integers, period length >= 1."""

    pre: tuple[tuple[int, ...], ...]
    period: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(tuple(int(a) for a in axis) for axis in self.pre))
        object.__setattr__(self, "period", tuple(tuple(int(b) for b in axis) for axis in self.period))
        if len(self.pre) != len(self.period) or not self.period:
            raise ValueError("need matching preperiod/period axis lists")
        if any(len(axis) < 1 for axis in self.period):
            raise ValueError("every axis needs a period of length >= 1")

    @property
    def m(self) -> int:
        return len(self.period)

    @property
    def preperiods(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.pre)

    @property
    def period_lengths(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.period)

    @property
    def jp_admissible(self) -> bool:
        """Whether the stream could come from an actual expansion (first axis >= 1)."""
        return all(b >= 1 for b in self.period[0]) and all(
            a >= 1 for a in self.pre[0][1:]
        )

    def quotient(self, axis: int, n: int) -> int:
        """a_n for one axis (1-based), unrolling the period."""
        pre = self.pre[axis - 1]
        if n < len(pre):
            return pre[n]
        cycle = self.period[axis - 1]
        return cycle[(n - len(pre)) % len(cycle)]

    def stream(self, count: int) -> list[tuple[int, ...]]:
        return [tuple(self.quotient(i, n) for i in range(1, self.m + 1)) for n in range(count)]


@dataclass(frozen=True)
class DerivedRecurrence:
    """A_{n + order*stride} = sum_j coeffs[j] * A_{n + j*stride} for n >= min_index."""

    coeffs: tuple
    stride: int
    min_index: int

    @property
    def order(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class CycleData:
    u: int
    v: tuple[int, ...]
    matrices: tuple[_matrix.Matrix, ...]
    char: lrs.CharPoly
    determinant: int


@dataclass(frozen=True)
class AxisResult:
    axis: int
    ok: bool
    first_failure: int | None


@dataclass(frozen=True)
class ForwardReport:
    spec: PeriodicSpec
    horizon: int
    cycle: CycleData
    recurrence: DerivedRecurrence
    axes: tuple[AxisResult, ...]

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.axes)


@dataclass(frozen=True)
class ConverseReport:
    m: int
    fits: tuple[lrs.LinearRecurrence | None, ...]  # axes 1..m+1
    quotient_periods: tuple[tuple[int, int] | None, ...]  # axes 1..m

    @property
    def all_fit(self) -> bool:
        return all(f is not None for f in self.fits)

    @property
    def all_periodic(self) -> bool:
        return all(p is not None for p in self.quotient_periods)

    @property
    def consistent(self) -> bool | None:
        """LRS fits => observed periodicity; None when the hypothesis is unmet."""
        if not self.all_fit:
            return None
        return self.all_periodic


def build_cycle_data(spec: PeriodicSpec) -> CycleData:
    """The u cycle matrices and their shared characteristic polynomial.

    M_i multiplies u step-matrix factors whose axis-k entry at factor j is the
    period value at index i + j + v_k, reduced mod the axis period length q_k
    (the alignment shifts are v_k = max preperiod - preperiod_k).
    """
    q = spec.period_lengths
    p = spec.preperiods
    u = math.lcm(*q)
    max_p = max(p)
    v = tuple(max_p - pk for pk in p)

    def factor(t: int) -> _matrix.Matrix:
        entries = [spec.period[k][(t + v[k]) % q[k]] for k in range(spec.m)]
        return convergents.step_matrix(entries)

    matrices = []
    for i in range(u):
        product = factor(i)
        for j in range(1, u):
            product = _matrix.mat_mul(product, factor(i + j))
        matrices.append(product)

    shared = lrs.char_poly(matrices[0])
    for i, mat in enumerate(matrices[1:], start=1):
        if lrs.char_poly(mat) != shared:
            raise SharedPolyViolationError(f"cycle matrix {i} disagrees with matrix 0")
    determinant = _matrix.det(matrices[0])
    if abs(determinant) != 1:
        raise SharedPolyViolationError(f"cycle matrix determinant {determinant}, expected +-1")
    return CycleData(u=u, v=v, matrices=tuple(matrices), char=shared, determinant=determinant)


def derived_recurrence(cd: CycleData, min_index: int) -> DerivedRecurrence:
    """Cayley-Hamilton, read as a recurrence along stride-u subsequences."""
    return DerivedRecurrence(coeffs=cd.char.recurrence_coeffs(), stride=cd.u, min_index=min_index)


def verify_forward(spec: PeriodicSpec, horizon: int) -> ForwardReport:
    """Exact check that the derived recurrence annihilates every A_n^(i).

    The horizon must leave room for at least three applications of the
    recurrence past the preperiods.
    """
    cd = build_cycle_data(spec)
    max_p = max(spec.preperiods)
    order = cd.char.degree
    if horizon < max_p + 3 * order * cd.u:
        raise ValueError(f"horizon {horizon} too small; need >= {max_p + 3 * order * cd.u}")
    rec = derived_recurrence(cd, min_index=max_p)

    table = convergents.ConvergentTable.from_quotients(spec.m, spec.stream(horizon + 1))
    axes = []
    for i in range(spec.m + 1):
        first_failure = None
        for n in range(max_p, horizon - order * cd.u + 1):
            predicted = sum(
                rec.coeffs[j] * table.row(n + j * cd.u)[i] for j in range(order)
            )
            if table.row(n + order * cd.u)[i] != predicted:
                first_failure = n
                break
        axes.append(AxisResult(axis=i + 1, ok=first_failure is None, first_failure=first_failure))
    return ForwardReport(spec=spec, horizon=horizon, cycle=cd, recurrence=rec, axes=tuple(axes))


def verify_converse(
    expansion: Expansion,
    table: convergents.ConvergentTable,
    max_order: int,
) -> ConverseReport:
    """Fit recurrences to the convergents, then test quotient periodicity.

    The table must come from the same input as the expansion; it may hold more
    rows than the expansion has steps (e.g. a detected cycle unrolled further),
    in which case the longer stream is what gets tested.
    """
    if table.m != expansion.m:
        raise ValueError("table and expansion dimensions differ")
    prefix = min(len(expansion.quotients), len(table.quotients))
    if table.quotients[:prefix] != expansion.quotients[:prefix]:
        raise ValueError("table quotients do not extend the expansion's stream")
    if table.max_n + 1 < 2 * max_order + 4:
        raise lrs.InsufficientDataError(
            f"need {2 * max_order + 4} table rows, got {table.max_n + 1}"
        )
    fits = tuple(
        lrs.fit_minimal([table.row(n)[i] for n in range(table.max_n + 1)], max_order)
        for i in range(table.m + 1)
    )
    periods = tuple(
        lrs.eventually_periodic([q[axis] for q in table.quotients])
        for axis in range(table.m)
    )
    return ConverseReport(m=expansion.m, fits=fits, quotient_periods=periods)


def converse_pipeline(
    inputs: InputTuple,
    max_iter: int,
    max_order: int,
) -> tuple[Expansion, convergents.ConvergentTable, ConverseReport]:
    """Expand, build the convergent table (cycles unrolled), run the converse check."""
    expansion = jacobi_perron.expand(inputs, max_iter)
    needed = 2 * max_order + 4
    try:
        rows = jacobi_perron.unrolled_quotients(expansion, max(needed, len(expansion.quotients)))
    except ValueError:
        rows = expansion.quotients  # finite or truncated stream: use what exists
    table = convergents.ConvergentTable.from_quotients(expansion.m, rows)
    return expansion, table, verify_converse(expansion, table, max_order)


def spec_from_cycle(expansion: Expansion) -> PeriodicSpec:
    """PeriodicSpec matching the cycle an expansion actually detected."""
    if not isinstance(expansion.status, CycleDetected):
        raise ValueError("expansion did not detect a cycle")
    pre_len = expansion.status.preperiod
    cycle_len = expansion.status.cycle
    qs = expansion.quotients
    pre = tuple(tuple(q[k] for q in qs[:pre_len]) for k in range(expansion.m))
    period = tuple(
        tuple(q[k] for q in qs[pre_len : pre_len + cycle_len]) for k in range(expansion.m)
    )
    return PeriodicSpec(pre=pre, period=period)

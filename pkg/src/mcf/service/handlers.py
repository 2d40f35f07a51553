"""Request-model -> response-model functions shared by the app and the CLI.

Raise ValueError (or subclasses) for bad input; ArithmeticError subclasses
signal internal consistency violations and are mapped to exit code 3 / HTTP
500 by the callers.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .. import convergents, cubic_rep, jacobi_perron, lrs, periodicity
from ..exactnum import AlgebraicReal, FieldElement, format_rational, parse_rational
from . import schemas


def _build_generator(model: schemas.AlgebraicNumberModel | None) -> AlgebraicReal:
    if model is None:
        return AlgebraicReal.rational_generator()
    return AlgebraicReal(model.minpoly, model.interval)


def _build_input_tuple(
    generator: schemas.AlgebraicNumberModel | None,
    values: list,
) -> jacobi_perron.InputTuple:
    gen = _build_generator(generator)
    elements = []
    for v in values:
        if isinstance(v, schemas.FieldElementModel):
            elements.append(FieldElement(gen, v.coords))
        else:
            elements.append(FieldElement.from_rational(gen, parse_rational(v)))
    return jacobi_perron.InputTuple(values=tuple(elements))


def _status_model(status) -> schemas.ExpansionStatusModel:
    if isinstance(status, jacobi_perron.Terminated):
        return schemas.ExpansionStatusModel(kind="terminated", step=status.step)
    if isinstance(status, jacobi_perron.CycleDetected):
        return schemas.ExpansionStatusModel(
            kind="cycle", preperiod=status.preperiod, cycle=status.cycle
        )
    return schemas.ExpansionStatusModel(kind="truncated", max_iter=status.max_iter)


def _lrs_model(fit: lrs.LinearRecurrence | None) -> schemas.LrsModel | None:
    if fit is None:
        return None
    return schemas.LrsModel(
        order=fit.order,
        coeffs=[format_rational(c) for c in fit.coeffs],
        init=[format_rational(c) for c in fit.initial],
        offset=fit.offset,
    )


def expand(request: schemas.ExpandRequest) -> schemas.ExpansionReportModel:
    inputs = _build_input_tuple(request.generator, request.values)
    expansion = jacobi_perron.expand(inputs, request.max_iter)
    return schemas.ExpansionReportModel(
        m=expansion.m,
        quotients=[list(q) for q in expansion.quotients],
        status=_status_model(expansion.status),
    )


def convergent_table(request: schemas.ConvergentsRequest) -> schemas.TableDumpModel:
    for row in request.quotients:
        if len(row) != request.m:
            raise ValueError(f"quotient row {row} does not have m={request.m} entries")
    table = convergents.ConvergentTable.from_quotients(request.m, request.quotients)
    rows = []
    for n in range(-table.m, table.max_n + 1):
        try:
            conv = [format_rational(c) for c in table.convergent(n)] if n >= 0 else None
        except convergents.ZeroDenominatorError:
            conv = None
        rows.append(
            schemas.TableRowModel(
                n=n,
                values=[format_rational(v) for v in table.row(n)],
                convergent=conv,
            )
        )
    return schemas.TableDumpModel(m=table.m, rows=rows)


def _periodic_spec(model: schemas.PeriodicSpecModel) -> periodicity.PeriodicSpec:
    if len(model.pre) != model.m or len(model.period) != model.m:
        raise ValueError("pre/period axis count must equal m")
    return periodicity.PeriodicSpec(
        pre=tuple(tuple(axis) for axis in model.pre),
        period=tuple(tuple(axis) for axis in model.period),
    )


def _forward_model(report: periodicity.ForwardReport) -> schemas.ForwardReportModel:
    return schemas.ForwardReportModel(
        m=report.spec.m,
        u=report.cycle.u,
        v=list(report.cycle.v),
        char_poly=[format_rational(c) for c in report.cycle.char.coeffs],
        determinant=report.cycle.determinant,
        recurrence=schemas.DerivedRecurrenceModel(
            coeffs=[format_rational(c) for c in report.recurrence.coeffs],
            stride=report.recurrence.stride,
            min_index=report.recurrence.min_index,
        ),
        horizon=report.horizon,
        axes=[
            schemas.AxisResultModel(axis=a.axis, ok=a.ok, first_failure=a.first_failure)
            for a in report.axes
        ],
        ok=report.ok,
    )


def verify_forward(request: schemas.VerifyForwardRequest) -> schemas.ForwardReportModel:
    spec = _periodic_spec(request.spec)
    return _forward_model(periodicity.verify_forward(spec, request.horizon))


def verify_forward_batch(
    request: schemas.VerifyForwardBatchRequest,
) -> schemas.ForwardBatchReportModel:
    reports = [
        _forward_model(periodicity.verify_forward(_periodic_spec(s), request.horizon))
        for s in request.specs
    ]
    return schemas.ForwardBatchReportModel(
        count=len(reports),
        passed=sum(1 for r in reports if r.ok),
        reports=reports,
    )


def verify_converse(request: schemas.VerifyConverseRequest) -> schemas.ConverseReportModel:
    inputs = _build_input_tuple(request.generator, request.values)
    expansion, _table, report = periodicity.converse_pipeline(
        inputs, request.max_iter, request.max_order
    )
    return schemas.ConverseReportModel(
        m=report.m,
        status=_status_model(expansion.status),
        fits=[_lrs_model(f) for f in report.fits],
        quotient_periods=[p for p in report.quotient_periods],
        all_fit=report.all_fit,
        consistent=report.consistent,
    )


def _decimal_upper(x: Fraction, significant: int = 3) -> str:
    """Outward-rounded short decimal rendering of a nonnegative bound."""
    if x == 0:
        return "0"
    exponent = 0
    scaled = x
    while scaled >= 10:
        scaled /= 10
        exponent += 1
    while scaled < 1:
        scaled *= 10
        exponent -= 1
    unit = 10 ** (significant - 1)
    mantissa = math.ceil(scaled * unit)
    if mantissa >= 10 * unit:  # ceil rolled over, e.g. 9.996 -> 10.0
        mantissa //= 10
        exponent += 1
    digits = str(mantissa)
    return f"{digits[0]}.{digits[1:]}e{exponent}"


def _error_row_model(row: cubic_rep.ErrorRow) -> schemas.ErrorRowModel:
    if row.bounds is None:
        return schemas.ErrorRowModel(n=row.n)
    models = [
        schemas.ErrorBoundModel(
            lo=format_rational(lo), hi=format_rational(hi), decimal=_decimal_upper(hi)
        )
        for lo, hi in row.bounds
    ]
    return schemas.ErrorRowModel(n=row.n, axis1=models[0], axis2=models[1])


def _convergent_columns(table: convergents.ConvergentTable | None, depth: int):
    columns: list[list[str] | None] = []
    if table is None:
        return columns
    for n in range(min(depth, table.max_n) + 1):
        try:
            columns.append([format_rational(c) for c in table.convergent(n)])
        except convergents.ZeroDenominatorError:
            columns.append(None)
    return columns


def cubic(request: schemas.CubicRequest) -> schemas.CubicReportModel:
    spec = cubic_rep.CubicSpec(
        p=request.spec.p, q=request.spec.q, r=request.spec.r, z=request.spec.z
    )
    report = cubic_rep.compare_with_jacobi(
        spec,
        depth=request.depth,
        fit_max_order=request.fit_max_order,
        precision=parse_rational(request.precision),
    )
    rep = report.rep
    return schemas.CubicReportModel(
        spec=request.spec,
        depth=report.depth,
        n_matrix=schemas.NMatrixModel(
            matrix=[list(r) for r in report.n_matrix.matrix],
            trace=report.n_matrix.trace,
            determinant=report.n_matrix.determinant,
            second_invariant=report.n_matrix.second_invariant,
        ),
        representation=schemas.RepresentationModel(
            axis1_pre=[format_rational(c) for c in rep.axis1_pre],
            axis1_period=[format_rational(c) for c in rep.axis1_period],
            axis2_pre=[format_rational(c) for c in rep.axis2_pre],
            axis2_period=[format_rational(c) for c in rep.axis2_period],
        ),
        rep_quotients=[
            [format_rational(a), format_rational(b)] for a, b in rep.stream(report.depth + 1)
        ],
        jacobi_quotients=[
            list(q)
            for q in (
                report.jacobi_table.quotients if report.jacobi_table else report.jacobi.quotients
            )
        ],
        jacobi_status=_status_model(report.jacobi.status),
        rep_convergents=_convergent_columns(report.rep_table, report.depth),
        jacobi_convergents=_convergent_columns(report.jacobi_table, report.depth),
        rep_errors=[_error_row_model(r) for r in report.rep_errors],
        jacobi_errors=[_error_row_model(r) for r in report.jacobi_errors],
        rep_fits=[_lrs_model(f) for f in report.rep_fits],
        jacobi_fits=[_lrs_model(f) for f in report.jacobi_fits],
        notes=report.notes,
    )


def lrs_fit(request: schemas.LrsFitRequest) -> schemas.LrsFitReportModel:
    fit = lrs.fit_minimal(request.terms, request.max_order)
    return schemas.LrsFitReportModel(fit=_lrs_model(fit))

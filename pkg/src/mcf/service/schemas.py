"""Request/response models; the wire format for the service and the CLI.

Numbers travel as exact rational strings ("p/q", integers allowed); decimal
renderings, where present, are outward-rounded and explicitly bounded.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..exactnum import parse_rational

RationalIn = Union[int, str]


def _check_rational(value: RationalIn) -> RationalIn:
    parse_rational(value)  # raises ValueError on garbage
    return value


class AlgebraicNumberModel(BaseModel):
    """{"minpoly": [c_0, ..., c_d], "interval": ["lo", "hi"]}"""

    minpoly: list[RationalIn] = Field(min_length=2)
    interval: tuple[RationalIn, RationalIn]

    @field_validator("minpoly", "interval")
    @classmethod
    def _rationals(cls, v):
        for item in v:
            _check_rational(item)
        return v


class FieldElementModel(BaseModel):
    """{"coords": ["p/q", ...]} over the request's generator."""

    coords: list[RationalIn] = Field(min_length=1)

    @field_validator("coords")
    @classmethod
    def _rationals(cls, v):
        for item in v:
            _check_rational(item)
        return v


class ExpandRequest(BaseModel):
    generator: Optional[AlgebraicNumberModel] = None
    values: list[Union[FieldElementModel, RationalIn]] = Field(min_length=1)
    max_iter: int = Field(default=500, ge=1)

    @field_validator("values")
    @classmethod
    def _rationals(cls, v):
        for item in v:
            if not isinstance(item, FieldElementModel):
                _check_rational(item)
        return v


class ExpansionStatusModel(BaseModel):
    kind: Literal["terminated", "cycle", "truncated"]
    step: Optional[int] = None
    preperiod: Optional[int] = None
    cycle: Optional[int] = None
    max_iter: Optional[int] = None


class ExpansionReportModel(BaseModel):
    m: int
    quotients: list[list[int]]
    status: ExpansionStatusModel


class ConvergentsRequest(BaseModel):
    m: int = Field(ge=1)
    quotients: list[list[RationalIn]] = Field(min_length=1)

    @field_validator("quotients")
    @classmethod
    def _rationals(cls, v):
        for row in v:
            for item in row:
                _check_rational(item)
        return v


class TableRowModel(BaseModel):
    n: int
    values: list[str]
    convergent: Optional[list[str]] = None  # null for n < 0 or zero denominator


class TableDumpModel(BaseModel):
    m: int
    rows: list[TableRowModel]


class PeriodicSpecModel(BaseModel):
    """{"m": m, "pre": [[...] x m], "period": [[...] x m]}"""

    m: int = Field(ge=1)
    pre: list[list[int]]
    period: list[list[int]]


class VerifyForwardRequest(BaseModel):
    spec: PeriodicSpecModel
    horizon: int = Field(default=150, ge=1)


class VerifyForwardBatchRequest(BaseModel):
    specs: list[PeriodicSpecModel] = Field(min_length=1)
    horizon: int = Field(default=150, ge=1)


class AxisResultModel(BaseModel):
    axis: int
    ok: bool
    first_failure: Optional[int] = None


class DerivedRecurrenceModel(BaseModel):
    coeffs: list[str]
    stride: int
    min_index: int


class ForwardReportModel(BaseModel):
    m: int
    u: int
    v: list[int]
    char_poly: list[str]  # monic, coefficients ascending
    determinant: int
    recurrence: DerivedRecurrenceModel
    horizon: int
    axes: list[AxisResultModel]
    ok: bool


class ForwardBatchReportModel(BaseModel):
    count: int
    passed: int
    reports: list[ForwardReportModel]


class LrsModel(BaseModel):
    """{"order": d, "coeffs": ["p/q", ...], "init": [...], "offset": n_0}"""

    order: int
    coeffs: list[str]
    init: list[str]
    offset: int


class VerifyConverseRequest(BaseModel):
    generator: Optional[AlgebraicNumberModel] = None
    values: list[Union[FieldElementModel, RationalIn]] = Field(min_length=1)
    max_iter: int = Field(default=500, ge=1)
    max_order: int = Field(default=8, ge=1)

    @field_validator("values")
    @classmethod
    def _rationals(cls, v):
        for item in v:
            if not isinstance(item, FieldElementModel):
                _check_rational(item)
        return v


class ConverseReportModel(BaseModel):
    m: int
    status: ExpansionStatusModel
    fits: list[Optional[LrsModel]]  # axes 1..m+1
    quotient_periods: list[Optional[tuple[int, int]]]  # axes 1..m
    all_fit: bool
    consistent: Optional[bool] = None


class CubicSpecModel(BaseModel):
    p: int
    q: int
    r: int
    z: int


class CubicRequest(BaseModel):
    spec: CubicSpecModel
    depth: int = Field(default=30, ge=1)
    fit_max_order: int = Field(default=12, ge=1)
    precision: str = "1e-30"

    @field_validator("precision")
    @classmethod
    def _positive_rational(cls, v):
        if parse_rational(v) <= 0:
            raise ValueError("precision must be positive")
        return v


class ErrorBoundModel(BaseModel):
    lo: str  # exact rational lower bound on |convergent - target|
    hi: str  # exact rational upper bound
    decimal: str  # outward-rounded rendering of hi


class ErrorRowModel(BaseModel):
    n: int
    axis1: Optional[ErrorBoundModel] = None  # null when the denominator vanished
    axis2: Optional[ErrorBoundModel] = None


class NMatrixModel(BaseModel):
    matrix: list[list[int]]
    trace: int
    determinant: int
    second_invariant: int


class RepresentationModel(BaseModel):
    axis1_pre: list[str]
    axis1_period: list[str]
    axis2_pre: list[str]
    axis2_period: list[str]


class CubicReportModel(BaseModel):
    spec: CubicSpecModel
    depth: int
    n_matrix: NMatrixModel
    representation: RepresentationModel
    rep_quotients: list[list[str]]  # one [axis1, axis2] pair per step
    jacobi_quotients: list[list[int]]  # unrolled to depth when a cycle was found
    jacobi_status: ExpansionStatusModel
    rep_convergents: list[Optional[list[str]]]  # [axis1, axis2] per n; null rows skipped
    jacobi_convergents: list[Optional[list[str]]]
    rep_errors: list[ErrorRowModel]
    jacobi_errors: list[ErrorRowModel]
    rep_fits: list[Optional[LrsModel]]
    jacobi_fits: list[Optional[LrsModel]]
    notes: list[str]


class LrsFitRequest(BaseModel):
    terms: list[RationalIn] = Field(min_length=1)
    max_order: int = Field(default=8, ge=1)

    @field_validator("terms")
    @classmethod
    def _rationals(cls, v):
        for item in v:
            _check_rational(item)
        return v


class LrsFitReportModel(BaseModel):
    fit: Optional[LrsModel] = None

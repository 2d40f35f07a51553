import math
from fractions import Fraction

import pytest

from mcf.exactnum import AlgebraicReal, FieldElement


@pytest.fixture()
def cbrt2():
    return AlgebraicReal([-2, 0, 0, 1], (1, 2))


@pytest.fixture()
def sqrt2():
    return AlgebraicReal([-2, 0, 1], (1, 2))


@pytest.fixture()
def phi():
    return AlgebraicReal([-1, -1, 1], (1, 2))  # x^2 - x - 1


@pytest.fixture()
def rational_gen():
    return AlgebraicReal.rational_generator()


def sqrt_generator(d: int) -> AlgebraicReal:
    k = math.isqrt(d)
    assert k * k != d, "d must not be a square"
    return AlgebraicReal([-d, 0, 1], (k, k + 1))


def rational_element(value) -> FieldElement:
    return FieldElement.from_rational(AlgebraicReal.rational_generator(), Fraction(value))


def bisect_root(poly_coeffs, lo: Fraction, hi: Fraction, steps: int = 80) -> tuple[Fraction, Fraction]:
    """Independent bisection oracle; poly coefficients ascending, exact arithmetic."""

    def ev(x):
        acc = Fraction(0)
        for c in reversed(poly_coeffs):
            acc = acc * x + c
        return acc

    lo, hi = Fraction(lo), Fraction(hi)
    sign_lo = ev(lo) > 0
    for _ in range(steps):
        mid = (lo + hi) / 2
        if (ev(mid) > 0) == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi

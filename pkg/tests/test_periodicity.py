"""Cycle matrices, derived recurrences, and both directions of the equivalence."""

import random
from fractions import Fraction

import pytest

from mcf import _matrix
from mcf.convergents import ConvergentTable
from mcf.jacobi_perron import InputTuple, expand
from mcf.lrs import CharPoly, InsufficientDataError
from mcf.periodicity import (
    PeriodicSpec,
    build_cycle_data,
    converse_pipeline,
    derived_recurrence,
    spec_from_cycle,
    verify_converse,
    verify_forward,
)

from conftest import sqrt_generator


def random_spec(rng: random.Random) -> PeriodicSpec:
    m = rng.choice([2, 3])
    pre = tuple(
        tuple(rng.randint(0, 5) for _ in range(rng.randint(0, 3))) for _ in range(m)
    )
    period = []
    for axis in range(m):
        qlen = rng.randint(1, 4)
        low = 1 if axis == 0 else 0
        period.append(tuple(rng.randint(low, 5) for _ in range(qlen)))
    return PeriodicSpec(pre=pre, period=tuple(period))


class TestPeriodicSpec:
    def test_admissibility_flag(self):
        assert PeriodicSpec(pre=((2,), (0,)), period=((1, 3), (0, 2))).jp_admissible
        assert not PeriodicSpec(pre=((), ()), period=((0,), (1,))).jp_admissible
        # synthetic streams with zero first-axis entries are still accepted
        spec = PeriodicSpec(pre=((), ()), period=((0, 1), (2,)))
        assert build_cycle_data(spec).u == 2

    def test_period_required(self):
        with pytest.raises(ValueError):
            PeriodicSpec(pre=((),), period=((),))

    def test_stream_unrolls(self):
        spec = PeriodicSpec(pre=((9,), ()), period=((1, 2), (5,)))
        assert spec.stream(5) == [(9, 5), (1, 5), (2, 5), (1, 5), (2, 5)]


class TestCycleData:
    def test_all_ones_m2(self):
        spec = PeriodicSpec(pre=((), ()), period=((1,), (1,)))
        cd = build_cycle_data(spec)
        assert cd.u == 1
        assert cd.matrices[0] == ((1, 1, 0), (1, 0, 1), (1, 0, 0))
        assert cd.char.coeffs == (-1, -1, -1, 1)  # x^3 - x^2 - x - 1
        assert cd.determinant == 1

    def test_pell(self):
        spec = PeriodicSpec(pre=((1,),), period=((2,),))
        cd = build_cycle_data(spec)
        assert cd.u == 1
        assert cd.matrices[0] == ((2, 1), (1, 0))
        assert cd.char.coeffs == (-1, -2, 1)  # x^2 - 2x - 1

    def test_mixed_period_lengths(self):
        spec = PeriodicSpec(pre=((), ()), period=((1, 2), (1, 2, 3)))
        cd = build_cycle_data(spec)
        assert cd.u == 6
        assert len(cd.matrices) == 6
        base = [_matrix.trace(_matrix.mat_pow(cd.matrices[0], k)) for k in (1, 2, 3)]
        for mat in cd.matrices[1:]:
            assert [_matrix.trace(_matrix.mat_pow(mat, k)) for k in (1, 2, 3)] == base

    def test_preperiod_alignment(self):
        spec = PeriodicSpec(pre=((3,), ()), period=((1, 2), (4,)))
        cd = build_cycle_data(spec)
        assert cd.v == (0, 1)
        assert cd.u == 2

    def test_u2_m1_product(self):
        # period (1, 2): M_0 = S(1) S(2), oracle by direct 2x2 multiplication
        spec = PeriodicSpec(pre=((),), period=((1, 2),))
        cd = build_cycle_data(spec)
        s1 = ((1, 1), (1, 0))
        s2 = ((2, 1), (1, 0))
        expected = _matrix.mat_mul(s1, s2)
        assert cd.matrices[0] == expected == ((3, 1), (2, 1))
        # oracle: trace 4, determinant 1 => x^2 - 4x + 1
        assert cd.char.coeffs == (1, -4, 1)

    def test_cayley_hamilton_zero(self):
        spec = PeriodicSpec(pre=((), ()), period=((1, 2), (3,)))
        cd = build_cycle_data(spec)
        assert _matrix.is_zero(cd.char.evaluate_at_matrix(cd.matrices[0]))


class TestDerivedRecurrence:
    def test_all_ones_m2(self):
        cd = build_cycle_data(PeriodicSpec(pre=((), ()), period=((1,), (1,))))
        rec = derived_recurrence(cd, min_index=0)
        assert rec.coeffs == (1, 1, 1)  # A_{n+3} = A_{n+2} + A_{n+1} + A_n
        assert rec.stride == 1

    def test_pell_recurrence(self):
        cd = build_cycle_data(PeriodicSpec(pre=((1,),), period=((2,),)))
        rec = derived_recurrence(cd, min_index=1)
        assert rec.coeffs == (1, 2)  # A_{n+2} = 2 A_{n+1} + A_n

    def test_stride_two(self):
        cd = build_cycle_data(PeriodicSpec(pre=((),), period=((1, 2),)))
        rec = derived_recurrence(cd, min_index=0)
        assert rec.stride == 2
        assert rec.coeffs == (-1, 4)  # from x^2 - 4x + 1


class TestVerifyForward:
    def test_all_ones(self):
        report = verify_forward(PeriodicSpec(pre=((), ()), period=((1,), (1,))), 150)
        assert report.ok and len(report.axes) == 3

    def test_golden(self):
        report = verify_forward(PeriodicSpec(pre=((),), period=((1,),)), 100)
        assert report.ok
        assert report.cycle.char.coeffs == (-1, -1, 1)

    def test_sqrt2(self):
        report = verify_forward(PeriodicSpec(pre=((1,),), period=((2,),)), 100)
        assert report.ok

    def test_horizon_too_small(self):
        with pytest.raises(ValueError, match="horizon"):
            verify_forward(PeriodicSpec(pre=((), ()), period=((1, 2), (1, 2, 3))), 20)

    def test_hundred_random_specs(self):
        rng = random.Random(11)
        for _ in range(100):
            report = verify_forward(random_spec(rng), 150)
            assert report.ok

    def test_determinant_sign_is_m_u(self):
        rng = random.Random(13)
        for _ in range(25):
            spec = random_spec(rng)
            cd = build_cycle_data(spec)
            assert abs(cd.determinant) == 1
            assert cd.determinant == (-1) ** (spec.m * cd.u)

    def test_fitted_poly_divides_shared_poly(self):
        # independent consistency: a minimal fit of the stride-u subsequence
        # divides the shared characteristic polynomial
        from mcf.lrs import fit_minimal

        spec = PeriodicSpec(pre=((2,), ()), period=((1, 3), (2,)))
        cd = build_cycle_data(spec)
        table = ConvergentTable.from_quotients(2, spec.stream(120))
        max_p = max(spec.preperiods)
        sub = [table.row(max_p + k * cd.u)[2] for k in range(40)]
        fit = fit_minimal(sub, cd.char.degree)
        assert fit is not None
        assert fit.char_poly().divides(cd.char)


class TestVerifyConverse:
    def test_phi(self, phi):
        e, table, report = converse_pipeline(InputTuple(values=(phi.theta(),)), 40, 4)
        assert report.all_fit
        assert report.fits[0].char_poly() == CharPoly((-1, -1, 1))
        assert report.fits[1].char_poly() == CharPoly((-1, -1, 1))
        assert report.quotient_periods[0] == (0, 1)
        assert report.consistent is True

    def test_sqrt2(self, sqrt2):
        e, table, report = converse_pipeline(InputTuple(values=(sqrt2.theta(),)), 40, 4)
        assert report.all_fit
        assert report.fits[1].char_poly() == CharPoly((-1, -2, 1))
        assert report.quotient_periods[0] == (1, 1)
        assert report.consistent is True

    def test_cubic_pair_outcome_recorded(self, cbrt2):
        # exploratory: no ground truth asserted, just a well-formed report
        t = cbrt2.theta()
        e, table, report = converse_pipeline(InputTuple(values=(t, t * t)), 60, 9)
        assert report.m == 2
        assert len(report.fits) == 3
        assert len(report.quotient_periods) == 2
        assert report.consistent in (True, False, None)

    def test_insufficient_data(self, rational_gen):
        from mcf.exactnum import FieldElement

        x = FieldElement.from_rational(rational_gen, Fraction(7, 3))
        with pytest.raises(InsufficientDataError):
            converse_pipeline(InputTuple(values=(x,)), 40, 8)

    def test_table_prefix_validated(self, phi):
        e = expand(InputTuple(values=(phi.theta(),)), max_iter=10)
        bad = ConvergentTable.from_quotients(1, [(2,)] * 20)
        with pytest.raises(ValueError, match="do not extend"):
            verify_converse(e, bad, 4)


class TestSpecFromCycle:
    def test_sqrt2_roundtrip(self, sqrt2):
        e = expand(InputTuple(values=(sqrt2.theta(),)), max_iter=20)
        spec = spec_from_cycle(e)
        assert spec.pre == ((1,),)
        assert spec.period == ((2,),)
        assert verify_forward(spec, 100).ok

    def test_quadratic_family_roundtrip(self):
        for d in (5, 10, 13):
            x = sqrt_generator(d).theta()
            e = expand(InputTuple(values=(x,)), max_iter=60)
            spec = spec_from_cycle(e)
            assert verify_forward(spec, max(spec.preperiods) + 10 * 2 * spec.period_lengths[0] + 60).ok

"""Expansion behavior: steps, termination, cycle detection, the m=1 oracle."""

import random
from fractions import Fraction

import pytest

from mcf.exactnum import FieldElement
from mcf.jacobi_perron import (
    CycleDetected,
    InputTuple,
    Terminated,
    Truncated,
    classical_cf,
    cycle_window,
    expand,
    jp_step,
    unrolled_quotients,
)

from conftest import sqrt_generator


def euclid_cf(num: int, den: int) -> list[int]:
    """Independent oracle: Euclidean algorithm quotients."""
    out = []
    while den:
        out.append(num // den)
        num, den = den, num - (num // den) * den
    return out


class TestJpStep:
    def test_phi_fixed_point(self, phi):
        t = phi.theta()
        step = jp_step((t,))
        assert step.quotients == (1,)
        assert step.state_after == (t,)  # phi - 1 = 1/phi

    def test_rational_pair(self, rational_gen):
        a = FieldElement.from_rational(rational_gen, Fraction(7, 3))
        b = FieldElement.from_rational(rational_gen, Fraction(5, 2))
        step = jp_step((a, b))
        assert step.quotients == (2, 2)
        # oracle: alpha' = 1/(1/2) = 2, beta' = (1/3)/(1/2) = 2/3
        assert step.state_after[0] == Fraction(2)
        assert step.state_after[1] == Fraction(2, 3)

    def test_cubic_pair_first_step(self, cbrt2):
        t = cbrt2.theta()
        step = jp_step((t, t * t))
        assert step.quotients == (1, 1)
        pivot = (t * t - 1).inverse()
        assert step.state_after == (pivot, (t - 1) * pivot)

    def test_exact_termination(self, rational_gen):
        x = FieldElement.from_rational(rational_gen, 4)
        step = jp_step((x,))
        assert step.quotients == (4,)
        assert step.state_after is None


class TestExpand:
    def test_golden_ratio(self, phi):
        e = expand(InputTuple(values=(phi.theta(),)), max_iter=10)
        assert e.status == CycleDetected(preperiod=0, cycle=1)
        assert all(q == (1,) for q in e.quotients)

    def test_sqrt2(self, sqrt2):
        e = expand(InputTuple(values=(sqrt2.theta(),)), max_iter=10)
        assert e.status == CycleDetected(preperiod=1, cycle=1)
        assert [q[0] for q in e.quotients] == [1, 2]

    def test_rational_pair_terminates(self, rational_gen):
        values = (
            FieldElement.from_rational(rational_gen, Fraction(7, 3)),
            FieldElement.from_rational(rational_gen, Fraction(5, 2)),
        )
        e = expand(InputTuple(values=values), max_iter=50)
        assert isinstance(e.status, Terminated)

    def test_truncation(self, cbrt2):
        t = cbrt2.theta()
        e = expand(InputTuple(values=(t, t * t)), max_iter=2)
        assert e.status == Truncated(max_iter=2)
        assert len(e.steps) == 2

    def test_cycle_soundness(self, sqrt2):
        # re-running from the preperiod state reproduces the cycle quotients
        e = expand(InputTuple(values=(sqrt2.theta(),)), max_iter=20)
        pre, cycle = cycle_window(e)
        start = e.initial_state if e.status.preperiod == 0 else e.steps[e.status.preperiod - 1].state_after
        state = start
        replayed = []
        for _ in range(e.status.cycle):
            step = jp_step(state)
            replayed.append(step.quotients)
            state = step.state_after
        assert replayed == cycle
        assert state == start

    def test_unrolled_quotients(self, sqrt2):
        e = expand(InputTuple(values=(sqrt2.theta(),)), max_iter=20)
        qs = unrolled_quotients(e, 8)
        assert [q[0] for q in qs] == [1, 2, 2, 2, 2, 2, 2, 2]

    def test_unrolled_refuses_truncated_overrun(self, cbrt2):
        t = cbrt2.theta()
        e = expand(InputTuple(values=(t, t * t)), max_iter=2)
        with pytest.raises(ValueError):
            unrolled_quotients(e, 10)


class TestClassicalCf:
    def test_355_113(self, rational_gen):
        # oracle first: Euclid gives the floor-based quotient stream
        assert euclid_cf(355, 113) == [3, 7, 16]
        e = classical_cf(FieldElement.from_rational(rational_gen, Fraction(355, 113)), 50)
        assert isinstance(e.status, Terminated)
        assert [q[0] for q in e.quotients] == [3, 7, 16]

    def test_phi(self, phi):
        e = classical_cf(phi.theta(), 12)
        assert e.status == CycleDetected(preperiod=0, cycle=1)
        assert all(q == (1,) for q in e.quotients)

    def test_sqrt2(self, sqrt2):
        e = classical_cf(sqrt2.theta(), 12)
        assert [q[0] for q in e.quotients] == [1, 2]
        assert e.status == CycleDetected(preperiod=1, cycle=1)

    def test_matches_expand_on_rationals(self, rational_gen):
        random.seed(2)
        for _ in range(25):
            den = random.randint(1, 400)
            num = random.randint(den + 1, 2000)
            x = FieldElement.from_rational(rational_gen, Fraction(num, den))
            a = expand(InputTuple(values=(x,)), max_iter=40)
            b = classical_cf(x, 40)
            assert a.quotients == b.quotients
            assert a.status == b.status
            assert [q[0] for q in a.quotients] == euclid_cf(num, den)[: len(a.quotients)]

    def test_matches_expand_on_quadratics(self):
        for d in (2, 3, 5, 7, 11, 13):
            x = sqrt_generator(d).theta()
            a = expand(InputTuple(values=(x,)), max_iter=30)
            b = classical_cf(x, 30)
            assert a.quotients == b.quotients


class TestInvariants:
    def test_tail_quotient_signs(self, cbrt2):
        t = cbrt2.theta()
        e = expand(InputTuple(values=(t, t * t)), max_iter=30)
        qs = unrolled_quotients(e, 30)
        for n, q in enumerate(qs):
            if n >= 1:
                assert q[0] >= 1
                assert all(a >= 0 for a in q[1:])

    def test_reconstruction_converges(self, cbrt2):
        from mcf.convergents import ConvergentTable

        t = cbrt2.theta()
        e = expand(InputTuple(values=(t, t * t)), max_iter=40)
        table = ConvergentTable.from_quotients(2, unrolled_quotients(e, 40))
        targets = (t, t * t)

        def max_gap(n):
            conv = table.convergent(n)
            gaps = []
            for target, c in zip(targets, conv):
                lo, hi = (target - c).enclosure(Fraction(1, 10**25))
                gaps.append(max(abs(lo), abs(hi)))
            return max(gaps)

        assert max_gap(35) < Fraction(1, 10**6)
        assert max_gap(35) < max_gap(5)

    def test_m1_states_exceed_one(self, sqrt2):
        e = expand(InputTuple(values=(sqrt2.theta(),)), max_iter=10)
        for step in e.steps:
            if step.state_after is not None:
                assert (step.state_after[0] - 1).sign() > 0

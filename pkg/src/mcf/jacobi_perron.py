"""The Jacobi-Perron iteration on an m-tuple of exact field elements.

One step takes the floors a_n^(i) of the current state and maps

    alpha_{n+1}^(1) = 1 / (alpha_n^(m) - a_n^(m))
    alpha_{n+1}^(i) = (alpha_n^(i-1) - a_n^(i-1)) / (alpha_n^(m) - a_n^(m))

for i = 2..m; for m = 1 this is the classical continued fraction map.
States are compared by their exact power-basis coordinates, so a repeat is a
genuine cycle and an exactly zero fractional part is genuine termination.
Whether cubic inputs ever cycle is unknown, so hitting the iteration cap is a
first-class outcome, not an error.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .exactnum import FieldElement

log = logging.getLogger(__name__)


class QuotientSignError(ArithmeticError):
    """A quotient violated a_n^(1) >= 1 or a_n^(i) >= 0 for n >= 1 (cannot happen)."""


@dataclass(frozen=True)
class InputTuple:
    values: tuple[FieldElement, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("need at least one value")
        gen = self.values[0].generator
        if any(v.generator is not gen for v in self.values):
            raise ValueError("all values must share one generator")

    @property
    def m(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Terminated:
    step: int

    kind = "terminated"


@dataclass(frozen=True)
class CycleDetected:
    preperiod: int
    cycle: int

    kind = "cycle"


@dataclass(frozen=True)
class Truncated:
    max_iter: int

    kind = "truncated"


Status = Terminated | CycleDetected | Truncated


@dataclass(frozen=True)
class ExpansionStep:
    quotients: tuple[int, ...]
    state_after: tuple[FieldElement, ...] | None  # None on the terminating step


@dataclass(frozen=True)
class Expansion:
    m: int
    initial_state: tuple[FieldElement, ...]
    steps: tuple[ExpansionStep, ...]
    status: Status

    @property
    def quotients(self) -> list[tuple[int, ...]]:
        return [s.quotients for s in self.steps]

    def axis_quotients(self, axis: int) -> list[int]:
        """Quotient stream of one axis (1-based)."""
        return [s.quotients[axis - 1] for s in self.steps]


def _state_key(state: tuple[FieldElement, ...]) -> tuple:
    return tuple(v.coords for v in state)


def jp_step(state: tuple[FieldElement, ...]) -> ExpansionStep:
    """One iteration; state_after is None when the last fractional part is zero."""
    quotients = tuple(v.floor() for v in state)
    fractional = [v - a for v, a in zip(state, quotients)]
    pivot = fractional[-1]
    if pivot.is_zero():
        return ExpansionStep(quotients=quotients, state_after=None)
    inv_pivot = pivot.inverse()
    nxt = [inv_pivot] + [f * inv_pivot for f in fractional[:-1]]
    return ExpansionStep(quotients=quotients, state_after=tuple(nxt))


def _check_quotients(quotients: tuple[int, ...], n: int) -> None:
    # from the iteration, for n >= 1: alpha^(1) > 1 and alpha^(i) > 0 (i >= 2)
    if n == 0:
        return
    if quotients[0] < 1 or any(a < 0 for a in quotients[1:]):
        raise QuotientSignError(f"step {n} produced quotients {quotients}")
    for i, a in enumerate(quotients[1:], start=2):
        if a == 0:
            log.info("zero quotient a_%d^(%d); ratio of fractional parts below 1", n, i)


def expand(inputs: InputTuple, max_iter: int) -> Expansion:
    """Iterate until exact termination, an exact state repeat, or max_iter."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    state = inputs.values
    seen = {_state_key(state): 0}
    steps: list[ExpansionStep] = []
    status: Status | None = None
    for n in range(max_iter):
        step = jp_step(state)
        _check_quotients(step.quotients, n)
        steps.append(step)
        if step.state_after is None:
            status = Terminated(step=n)
            break
        state = step.state_after
        key = _state_key(state)
        if key in seen:
            status = CycleDetected(preperiod=seen[key], cycle=n + 1 - seen[key])
            break
        seen[key] = n + 1
    if status is None:
        status = Truncated(max_iter=max_iter)
    return Expansion(m=inputs.m, initial_state=inputs.values, steps=tuple(steps), status=status)


def classical_cf(x: FieldElement, max_iter: int) -> Expansion:
    """Plain continued fraction of a single value; independent m = 1 oracle."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    steps: list[ExpansionStep] = []
    status: Status | None = None
    state = x
    seen = {x.coords: 0}
    for n in range(max_iter):
        a = state.floor()
        remainder = state - a
        if remainder.is_zero():
            steps.append(ExpansionStep(quotients=(a,), state_after=None))
            status = Terminated(step=n)
            break
        state = remainder.inverse()
        steps.append(ExpansionStep(quotients=(a,), state_after=(state,)))
        if state.coords in seen:
            status = CycleDetected(preperiod=seen[state.coords], cycle=n + 1 - seen[state.coords])
            break
        seen[state.coords] = n + 1
    if status is None:
        status = Truncated(max_iter=max_iter)
    return Expansion(m=1, initial_state=(x,), steps=tuple(steps), status=status)


def cycle_window(expansion: Expansion) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """(preperiod quotients, one cycle of quotients) for a cycle-detected expansion."""
    if not isinstance(expansion.status, CycleDetected):
        raise ValueError("expansion did not detect a cycle")
    pre = expansion.status.preperiod
    cyc = expansion.status.cycle
    qs = expansion.quotients
    return qs[:pre], qs[pre : pre + cyc]


def unrolled_quotients(expansion: Expansion, count: int) -> list[tuple[int, ...]]:
    """The first ``count`` quotient tuples of the (possibly continued) stream.

    When a cycle was detected the state repeat is exact, so the stream is
    periodic from the preperiod on and can be continued without iterating.
    """
    qs = expansion.quotients
    if len(qs) >= count:
        return qs[:count]
    if not isinstance(expansion.status, CycleDetected):
        raise ValueError(
            f"expansion provides {len(qs)} quotient rows and did not cycle; cannot reach {count}"
        )
    pre, cyc = expansion.status.preperiod, expansion.status.cycle
    out = list(qs)
    while len(out) < count:
        out.append(out[pre + (len(out) - pre) % cyc])
    return out

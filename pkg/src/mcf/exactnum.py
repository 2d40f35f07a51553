"""Exact arithmetic in a real algebraic number field Q(theta).

A field is described by one :class:`AlgebraicReal` theta: an integer
polynomial together with a rational isolating interval pinning one of its
real roots.  Every quantity computed in the field is a
:class:`FieldElement`, i.e. rational coordinates over the power basis
1, theta, ..., theta^(d-1).  Equality is a coordinate comparison, and
sign/floor are decided by refining the isolating interval with exact
bisection, so no floating point enters anywhere.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction, str]

log = logging.getLogger(__name__)

# Rational-root screening enumerates integer divisors by trial division;
# past this bound we accept the polynomial on caller assertion instead.
_DIVISOR_SCREEN_BOUND = 10**12


class GeneratorMismatchError(ValueError):
    """Two field elements do not live over the same generator."""


class NotInvertibleError(ZeroDivisionError):
    """Inverse of zero requested; expansions use this as their stop signal."""


def parse_rational(text: RationalLike) -> Fraction:
    """Parse "p/q" (or a decimal / integer string) into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(value) -> str:
    """Render an exact value as "p/q" (or "p" when integral)."""
    return str(Fraction(value))


# ---------------------------------------------------------------------------
# dense univariate polynomials, coefficients ascending
# ---------------------------------------------------------------------------


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def eval_poly(coeffs: Sequence, x: Fraction) -> Fraction:
    """Evaluate a polynomial (coefficients ascending) at an exact point."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


_poly_eval = eval_poly


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in a]
    _trim(rem)
    quo = [Fraction(0)] * max(0, len(rem) - len(b) + 1)
    lead = Fraction(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quo[shift] = factor
        for i, bi in enumerate(b):
            rem[shift + i] -= factor * bi
        _trim(rem)
    return _trim(quo), rem


def _poly_deriv(coeffs: Sequence) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _sign_of(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _sign_variations(values: Iterable) -> int:
    signs = [_sign_of(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_chain(coeffs: Sequence) -> list[list[Fraction]]:
    """Sturm chain of a squarefree polynomial (irreducible minpolys qualify)."""
    chain = [[Fraction(c) for c in _trim(list(coeffs))]]
    chain.append([Fraction(c) for c in _poly_deriv(chain[0])])
    while chain[-1]:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return [p for p in chain if p]


def count_real_roots(coeffs: Sequence, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; endpoints must not be roots."""
    chain = sturm_chain(coeffs)
    at_lo = _sign_variations(_poly_eval(p, lo) for p in chain)
    at_hi = _sign_variations(_poly_eval(p, hi) for p in chain)
    return at_lo - at_hi


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _has_rational_root(coeffs: Sequence[int]) -> bool:
    """Exact rational-root test for a primitive integer polynomial."""
    if coeffs[0] == 0:
        return True  # root at 0
    lead = coeffs[-1]
    const = coeffs[0]
    for q in _divisors(lead):
        for p in _divisors(const):
            cand = Fraction(p, q)
            if _poly_eval(coeffs, cand) == 0 or _poly_eval(coeffs, -cand) == 0:
                return True
    return False


def _normalize_intpoly(coeffs: Sequence[RationalLike]) -> tuple[int, ...]:
    """Clear denominators, strip content, force a positive leading coefficient."""
    fracs = [parse_rational(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if len(fracs) < 2:
        raise ValueError("minimal polynomial must have degree >= 1")
    denom_lcm = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom_lcm) for f in fracs]
    content = math.gcd(*(abs(c) for c in ints))
    ints = [c // content for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# interval arithmetic over exact rational endpoints
# ---------------------------------------------------------------------------

Interval = tuple[Fraction, Fraction]


def _iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _iv_poly_eval(coeffs: Sequence[Fraction], theta: Interval) -> Interval:
    lo = hi = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        lo, hi = _iv_mul((lo, hi), theta)
        lo, hi = lo + c, hi + c
    return lo, hi


# ---------------------------------------------------------------------------
# the generator
# ---------------------------------------------------------------------------


class AlgebraicReal:
    """A real root of an integer polynomial, pinned by an isolating interval.

    The isolating interval is a precision cache: it only ever shrinks, and the
    root inside never changes, so refinement is transparent to (and shared by)
    every FieldElement referencing this generator.  The represented value is
    immutable; all operations are single-threaded.
    """

    __slots__ = ("minpoly", "irreducibility_assumed", "_lo", "_hi", "_sign_lo")

    def __init__(
        self,
        minpoly: Sequence[RationalLike],
        interval: tuple[RationalLike, RationalLike],
    ):
        self.minpoly = _normalize_intpoly(minpoly)
        lo, hi = parse_rational(interval[0]), parse_rational(interval[1])
        if lo >= hi:
            raise ValueError("isolating interval must satisfy lo < hi")
        if _poly_eval(self.minpoly, lo) == 0 or _poly_eval(self.minpoly, hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")

        degree = self.degree
        self.irreducibility_assumed = False
        if degree in (2, 3):
            # a quadratic or cubic is irreducible over Q iff it has no rational root
            if max(abs(self.minpoly[0]), abs(self.minpoly[-1])) > _DIVISOR_SCREEN_BOUND:
                self.irreducibility_assumed = True
                log.info(
                    "degree-%d polynomial too large for rational-root screening; "
                    "irreducibility accepted as caller assertion",
                    degree,
                )
            elif _has_rational_root(self.minpoly):
                raise ValueError("polynomial is reducible over Q (rational root found)")
        elif degree >= 4:
            self.irreducibility_assumed = True
            log.info(
                "degree-%d minimal polynomial accepted as irreducible by caller assertion",
                degree,
            )

        if count_real_roots(self.minpoly, lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one real root")
        self._lo = lo
        self._hi = hi
        self._sign_lo = _sign_of(_poly_eval(self.minpoly, lo))

    @classmethod
    def rational_generator(cls) -> "AlgebraicReal":
        """Degree-1 generator (root of x); hosts plain rational tuples."""
        return cls((0, 1), (-1, 1))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def interval(self) -> Interval:
        return self._lo, self._hi

    def width(self) -> Fraction:
        return self._hi - self._lo

    def __repr__(self) -> str:
        return f"AlgebraicReal(minpoly={list(self.minpoly)}, interval=({self._lo}, {self._hi}))"

    def _bisect_once(self) -> None:
        if self.degree == 1:
            # the root is rational and known; shrink symmetrically around it,
            # staying inside the current interval
            root = Fraction(-self.minpoly[0], self.minpoly[1])
            quarter = (self._hi - self._lo) / 4
            self._lo = max(self._lo, root - quarter)
            self._hi = min(self._hi, root + quarter)
            return
        mid = (self._lo + self._hi) / 2
        s = _sign_of(_poly_eval(self.minpoly, mid))
        if s == 0:
            # only reachable when a caller-asserted irreducibility was false
            raise ArithmeticError("bisection midpoint is a rational root; generator is reducible")
        if s == self._sign_lo:
            self._lo = mid
        else:
            self._hi = mid

    def refine_steps(self, steps: int) -> "AlgebraicReal":
        for _ in range(steps):
            self._bisect_once()
        return self

    def refine(self, width_bound: RationalLike) -> "AlgebraicReal":
        """Shrink the isolating interval to width <= width_bound; returns self.

        The interval is shared state for every FieldElement over this
        generator, so the extra precision benefits all of them.
        """
        bound = parse_rational(width_bound)
        if bound <= 0:
            raise ValueError("width bound must be positive")
        while self._hi - self._lo > bound:
            self._bisect_once()
        return self

    def element(self, *coords: RationalLike) -> "FieldElement":
        return FieldElement(self, coords)

    def theta(self) -> "FieldElement":
        coords = [0] * self.degree
        if self.degree == 1:
            # the degree-1 generator is the root of x, i.e. literally zero
            return FieldElement(self, (Fraction(-self.minpoly[0], self.minpoly[1]),))
        coords[1] = 1
        return FieldElement(self, coords)


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------


def _poly_xgcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Extended Euclid in Q[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _trim(r1):
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1))])
    return r0, s0, t0


def _zip_pad(a: Sequence, b: Sequence):
    n = max(len(a), len(b))
    zero = Fraction(0)
    return zip(
        list(a) + [zero] * (n - len(a)),
        list(b) + [zero] * (n - len(b)),
    )


class FieldElement:
    """c_0 + c_1*theta + ... + c_{d-1}*theta^{d-1} with exact rational c_i."""

    __slots__ = ("generator", "coords")

    def __init__(self, generator: AlgebraicReal, coords: Sequence[RationalLike]):
        d = generator.degree
        values = [parse_rational(c) for c in coords]
        if len(values) > d:
            raise ValueError(f"expected at most {d} coordinates, got {len(values)}")
        values += [Fraction(0)] * (d - len(values))
        self.generator = generator
        self.coords = tuple(values)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_rational(cls, generator: AlgebraicReal, value: RationalLike) -> "FieldElement":
        return cls(generator, (parse_rational(value),))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.generator is not self.generator:
                raise GeneratorMismatchError("elements live over different generators")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(self.generator, other)
        return NotImplemented  # type: ignore[return-value]

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        if self.generator.degree == 1:
            return True
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        # over a degree-1 generator the power basis is just {1}
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.coords[0]

    # -- ring structure ------------------------------------------------------

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return FieldElement(self.generator, [a + b for a, b in zip(self.coords, rhs.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.generator, [-c for c in self.coords])

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return FieldElement(self.generator, [a - b for a, b in zip(self.coords, rhs.coords)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        product = _poly_mul(self.coords, rhs.coords)
        minpoly = [Fraction(c) for c in self.generator.minpoly]
        _, reduced = _poly_divmod(product, minpoly)
        return FieldElement(self.generator, reduced)

    __rmul__ = __mul__

    def __truediv__(self, other):
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via extended Euclid modulo the minpoly."""
        if self.is_zero():
            raise NotInvertibleError("zero has no inverse")
        if self.is_rational():
            return FieldElement.from_rational(self.generator, 1 / self.as_rational())
        minpoly = [Fraction(c) for c in self.generator.minpoly]
        g, s, _ = _poly_xgcd(list(self.coords), minpoly)
        if len(_trim(list(g))) != 1:
            raise ArithmeticError(
                "gcd with the generator polynomial is non-constant; "
                "caller-asserted irreducibility is false"
            )
        scale = g[0]
        return FieldElement(self.generator, [c / scale for c in s])

    # -- order structure -----------------------------------------------------

    def enclosure(self, width_bound: RationalLike | None = None) -> Interval:
        """Exact rational bounds on the value, optionally refined to a width."""
        if self.is_rational():
            v = self.as_rational()
            return v, v
        lo, hi = _iv_poly_eval(self.coords, self.generator.interval)
        if width_bound is not None:
            bound = parse_rational(width_bound)
            steps = 16
            while hi - lo > bound:
                self.generator.refine_steps(steps)
                steps = min(steps * 2, 256)
                lo, hi = _iv_poly_eval(self.coords, self.generator.interval)
        return lo, hi

    def sign(self) -> int:
        """-1, 0 or +1; decided exactly."""
        if self.is_zero():
            return 0
        if self.is_rational():
            return _sign_of(self.as_rational())
        steps = 16
        while True:
            lo, hi = _iv_poly_eval(self.coords, self.generator.interval)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            # a nonzero algebraic number is bounded away from zero, so this ends
            self.generator.refine_steps(steps)
            steps = min(steps * 2, 256)

    def floor(self) -> int:
        """The unique integer k with k <= value < k + 1."""
        if self.is_rational():
            return math.floor(self.as_rational())
        steps = 16
        while True:
            lo, hi = _iv_poly_eval(self.coords, self.generator.interval)
            k = math.floor(lo)
            if k == math.floor(hi):
                return k
            # irrational values never sit on an integer, so refinement decides
            self.generator.refine_steps(steps)
            steps = min(steps * 2, 256)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_rational() == other
        if isinstance(other, FieldElement):
            return self.generator is other.generator and self.coords == other.coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.generator), self.coords))

    def __repr__(self) -> str:
        terms = " + ".join(f"({c})*t^{i}" if i else f"({c})" for i, c in enumerate(self.coords) if c != 0)
        return f"FieldElement[{terms or '0'}]"

"""Certified real arithmetic on decimal enclosures.

Every transcendental quantity used by an inequality verdict is represented
as an interval [lo, hi] guaranteed to contain the true real value.  Field
operations use directed rounding (two decimal contexts, one rounding toward
-inf and one toward +inf); ln and sqrt rely on libmpdec's correctly-rounded
results widened by one unit in the last place on each side.

A comparison is decided only when the enclosures do not overlap.  The
``decide`` driver re-evaluates a straddling comparison at doubled precision,
up to a fixed number of escalations, and raises if the comparison still
cannot be resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_EVEN
from fractions import Fraction
from functools import lru_cache

DEFAULT_BITS = 128
DEFAULT_ESCALATIONS = 4

# libmpdec needs generous exponent room; the quantities here are all modest.
_EMAX = 10**6
_EMIN = -(10**6)


class PrecisionExhaustedError(ArithmeticError):
    """A comparison still straddled after the last precision escalation."""


def _digits(bits: int) -> int:
    return max(6, math.ceil(bits * math.log10(2)))


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] containing a real value."""

    lo: Decimal
    hi: Decimal

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure [{self.lo}, {self.hi}]")

    def width(self) -> Decimal:
        return self.hi - self.lo

    def contains(self, x: Decimal | int | Fraction) -> bool:
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= Decimal(x) <= self.hi

    def surely_positive(self) -> bool:
        return self.lo > 0

    def as_pair(self) -> tuple[str, str]:
        return (str(self.lo), str(self.hi))


# Three-valued comparison results: True / False when certain, None when the
# enclosures overlap and the verdict would depend on rounding.

def lt(a: Enclosure, b: Enclosure) -> bool | None:
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi:
        return False
    return None


def le(a: Enclosure, b: Enclosure) -> bool | None:
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    return None


def fraction_le(x: Fraction, b: Enclosure) -> bool | None:
    """Is the exact rational x <= the real enclosed by b?"""
    if x <= Fraction(b.lo):
        return True
    if x > Fraction(b.hi):
        return False
    return None


class EnclosureContext:
    """Directed-rounding arithmetic at a fixed working precision.

    The precision is given in bits and converted to decimal digits.  All
    operations return enclosures that contain the exact real result of the
    operation applied to any reals inside the argument enclosures.
    """

    def __init__(self, bits: int = DEFAULT_BITS):
        if bits < 16:
            raise ValueError("working precision below 16 bits is not useful")
        self.bits = bits
        self.digits = _digits(bits)
        self._down = Context(prec=self.digits, rounding=ROUND_FLOOR,
                             Emax=_EMAX, Emin=_EMIN)
        self._up = Context(prec=self.digits, rounding=ROUND_CEILING,
                           Emax=_EMAX, Emin=_EMIN)
        self._near = Context(prec=self.digits, rounding=ROUND_HALF_EVEN,
                             Emax=_EMAX, Emin=_EMIN)
        self._constants: dict[str, Enclosure] = {}

    # -- constructors --------------------------------------------------

    def of_int(self, n: int) -> Enclosure:
        d = Decimal(n)
        return Enclosure(d, d)

    def of_fraction(self, q: Fraction) -> Enclosure:
        num = Decimal(q.numerator)
        den = Decimal(q.denominator)
        return Enclosure(self._down.divide(num, den), self._up.divide(num, den))

    # -- field operations ----------------------------------------------

    def add(self, a: Enclosure, b: Enclosure) -> Enclosure:
        return Enclosure(self._down.add(a.lo, b.lo), self._up.add(a.hi, b.hi))

    def sub(self, a: Enclosure, b: Enclosure) -> Enclosure:
        return Enclosure(self._down.subtract(a.lo, b.hi),
                         self._up.subtract(a.hi, b.lo))

    def mul(self, a: Enclosure, b: Enclosure) -> Enclosure:
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lo = min(self._down.multiply(x, y) for x, y in pairs)
        hi = max(self._up.multiply(x, y) for x, y in pairs)
        return Enclosure(lo, hi)

    def div(self, a: Enclosure, b: Enclosure) -> Enclosure:
        if b.lo <= 0 <= b.hi:
            raise ZeroDivisionError("divisor enclosure straddles zero")
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lo = min(self._down.divide(x, y) for x, y in pairs)
        hi = max(self._up.divide(x, y) for x, y in pairs)
        return Enclosure(lo, hi)

    # -- correctly-rounded primitives, widened to enclosures ------------

    def _widen_down(self, d: Decimal) -> Decimal:
        return d.next_minus(context=self._down)

    def _widen_up(self, d: Decimal) -> Decimal:
        return d.next_plus(context=self._up)

    def ln(self, a: Enclosure) -> Enclosure:
        """Natural log; requires a strictly positive enclosure.

        Decimal.ln is correctly rounded (error at most half an ulp), so
        stepping one ulp outward on each side yields a true enclosure; ln
        is increasing, so endpoints map to endpoints.
        """
        if a.lo <= 0:
            raise ValueError("ln requires a strictly positive enclosure")
        lo = self._widen_down(self._near.ln(a.lo))
        if a.hi == a.lo:
            hi = self._widen_up(self._near.ln(a.lo))
        else:
            hi = self._widen_up(self._near.ln(a.hi))
        return Enclosure(lo, hi)

    def sqrt(self, a: Enclosure) -> Enclosure:
        if a.lo < 0:
            raise ValueError("sqrt requires a nonnegative enclosure")
        lo = self._widen_down(self._near.sqrt(a.lo))
        hi = self._widen_up(self._near.sqrt(a.hi))
        if lo < 0:
            lo = Decimal(0)
        return Enclosure(lo, hi)

    # -- derived quantities ---------------------------------------------

    def ln_int(self, n: int) -> Enclosure:
        return self.ln(self.of_int(n))

    def lnln_int(self, n: int) -> Enclosure:
        """Enclosure of ln(ln n) for an integer n >= 2."""
        if n < 2:
            raise ValueError("ln(ln n) requires n >= 2")
        return self.ln(self.ln_int(n))

    def log_two(self) -> Enclosure:
        if "log_two" not in self._constants:
            self._constants["log_two"] = self.ln_int(2)
        return self._constants["log_two"]

    def log_golden_ratio(self) -> Enclosure:
        """Enclosure of ln((1 + sqrt 5) / 2)."""
        if "log_golden_ratio" not in self._constants:
            s = self.sqrt(self.of_int(5))
            ratio = self.div(self.add(self.of_int(1), s), self.of_int(2))
            self._constants["log_golden_ratio"] = self.ln(ratio)
        return self._constants["log_golden_ratio"]


@lru_cache(maxsize=32)
def context(bits: int) -> EnclosureContext:
    """Shared context per precision; its constant cache is append-only."""
    return EnclosureContext(bits)


def decide(check, *, bits: int = DEFAULT_BITS,
           escalations: int = DEFAULT_ESCALATIONS) -> tuple[bool, int]:
    """Resolve a three-valued comparison by escalating precision.

    ``check`` receives an EnclosureContext and returns True/False/None.
    Returns (verdict, bits_used).  Raises PrecisionExhaustedError when the
    comparison still straddles after the final escalation.
    """
    current = bits
    for _ in range(escalations + 1):
        verdict = check(context(current))
        if verdict is not None:
            return verdict, current
        current *= 2
    raise PrecisionExhaustedError(
        f"comparison undecided after {escalations} escalations from {bits} bits")

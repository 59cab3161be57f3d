from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucascert import certified
from lucascert.certified import (Enclosure, EnclosureContext,
                                 PrecisionExhaustedError, decide)


def mp_value(expr: str, digits: int = 60) -> Fraction:
    """High-precision oracle value as an exact rational."""
    with mpmath.workdps(digits):
        return Fraction(mpmath.nstr(mpmath.mpf(eval(expr, {"mp": mpmath})),
                                    digits - 5, strip_zeros=False))


def test_log_two_contains_oracle():
    ctx = EnclosureContext(128)
    oracle = mp_value("mp.log(2)")
    enc = ctx.log_two()
    assert Fraction(enc.lo) <= oracle <= Fraction(enc.hi)
    assert enc.width() < Decimal("1e-35")


def test_log_golden_ratio_contains_oracle():
    ctx = EnclosureContext(128)
    oracle = mp_value("mp.log((1 + mp.sqrt(5)) / 2)")
    enc = ctx.log_golden_ratio()
    assert Fraction(enc.lo) <= oracle <= Fraction(enc.hi)


def test_lnln_contains_oracle():
    ctx = EnclosureContext(128)
    for n in (2, 11, 97, 1800, 99991):
        oracle = mp_value(f"mp.log(mp.log({n}))")
        enc = ctx.lnln_int(n)
        assert Fraction(enc.lo) <= oracle <= Fraction(enc.hi), n


def test_ln_requires_positive():
    ctx = EnclosureContext(64)
    with pytest.raises(ValueError):
        ctx.ln(Enclosure(Decimal(0), Decimal(1)))
    with pytest.raises(ValueError):
        ctx.lnln_int(1)


def test_enclosure_validation():
    with pytest.raises(ValueError):
        Enclosure(Decimal(2), Decimal(1))


fractions_st = st.fractions(min_value=Fraction(-1000), max_value=Fraction(1000),
                            max_denominator=10**6)


@settings(max_examples=200, deadline=None)
@given(a=fractions_st, b=fractions_st)
def test_field_ops_contain_exact_results(a, b):
    ctx = EnclosureContext(64)
    ea, eb = ctx.of_fraction(a), ctx.of_fraction(b)
    assert ea.contains(a) and eb.contains(b)
    assert ctx.add(ea, eb).contains(a + b)
    assert ctx.sub(ea, eb).contains(a - b)
    assert ctx.mul(ea, eb).contains(a * b)
    if b != 0 and not (Fraction(eb.lo) <= 0 <= Fraction(eb.hi)):
        assert ctx.div(ea, eb).contains(a / b)


def test_division_by_straddling_enclosure_rejected():
    ctx = EnclosureContext(64)
    with pytest.raises(ZeroDivisionError):
        ctx.div(ctx.of_int(1), Enclosure(Decimal(-1), Decimal(1)))


def test_sqrt_containment():
    ctx = EnclosureContext(128)
    for n in (2, 5, 10, 144):
        oracle = mp_value(f"mp.sqrt({n})")
        assert ctx.sqrt(ctx.of_int(n)).contains(oracle), n


def test_comparisons_three_valued():
    ctx = EnclosureContext(64)
    two, three = ctx.of_int(2), ctx.of_int(3)
    assert certified.lt(two, three) is True
    assert certified.lt(three, two) is False
    overlapping = Enclosure(Decimal(1), Decimal(3))
    assert certified.lt(overlapping, ctx.of_int(2)) is None


def test_fraction_le():
    ctx = EnclosureContext(64)
    enc = ctx.of_fraction(Fraction(1, 3))
    assert certified.fraction_le(Fraction(1, 4), enc) is True
    assert certified.fraction_le(Fraction(1, 2), enc) is False
    assert certified.fraction_le(Fraction(1, 3), enc) is None  # straddles


def test_decide_escalates_and_settles():
    # ln 4 vs 2 ln 2 + tiny epsilon: decidable, but only once the enclosure
    # width drops below the gap
    gap = Fraction(1, 10**50)

    def check(ctx: EnclosureContext):
        lhs = ctx.ln_int(4)
        rhs = ctx.add(ctx.mul(ctx.of_int(2), ctx.log_two()),
                      ctx.of_fraction(gap))
        return certified.lt(lhs, rhs)

    verdict, bits = decide(check, bits=64, escalations=4)
    assert verdict is True
    assert bits > 64  # 64-bit enclosures are wider than 1e-50


def test_decide_raises_on_exact_tie():
    # ln 4 and 2 ln 2 are the same real number: no precision can separate
    # them, so the escalation cap must trip
    def check(ctx: EnclosureContext):
        return certified.lt(ctx.ln_int(4),
                            ctx.mul(ctx.of_int(2), ctx.log_two()))

    with pytest.raises(PrecisionExhaustedError):
        decide(check, bits=64, escalations=3)


def test_decide_reports_bits_used():
    def check(ctx: EnclosureContext):
        return certified.lt(ctx.ln_int(2), ctx.ln_int(3))

    verdict, bits = decide(check, bits=128, escalations=4)
    assert verdict is True and bits == 128

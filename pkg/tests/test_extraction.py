import random
from fractions import Fraction

import pytest

from cfconj.constants import ConstantSpec, evaluate_constant
from cfconj.extraction import (
    DEFAULT_DEPTH,
    SequenceSample,
    euclidean_cf,
    extract_signed_cf,
    rebuild_value,
)
from cfconj.sicf import SignPattern

PLUS = SignPattern((1,))


def test_gcd_example_signed():
    sample = extract_signed_cf(Fraction(14, 9), SignPattern((-1, 1)), 10)
    assert sample.terms == (2, 2, 4)
    assert sample.terminated
    assert rebuild_value(sample) == Fraction(14, 9)


def test_gcd_example_unsigned():
    sample = extract_signed_cf(Fraction(14, 9), PLUS, 10)
    assert sample.terms == (1, 1, 1, 4)
    assert sample.terminated
    assert euclidean_cf(Fraction(14, 9)) == [1, 1, 1, 4]


def test_e_simple_pattern():
    e = evaluate_constant(ConstantSpec.catalog("e"), 200)
    sample = extract_signed_cf(e, PLUS, 8)
    assert sample.terms == (2, 1, 2, 1, 1, 4, 1, 1, 6)
    assert not sample.terminated and sample.precision_exhausted_at is None


def test_mobius_of_e_with_period_six_pattern():
    e = evaluate_constant(ConstantSpec.catalog("e"), 400).as_fraction()
    value = (2 + 2 * e) / (-1 + 3 * e)
    pattern = SignPattern((-1, 1, 1, -1, 1, 1))
    sample = extract_signed_cf((value, value), pattern, 12)
    assert sample.terms[:6] == (2, 1, 24, 3, 2, 13)


def test_depth_and_default():
    e = evaluate_constant(ConstantSpec.catalog("e"), 400)
    sample = extract_signed_cf(e, PLUS)
    assert len(sample.terms) == DEFAULT_DEPTH + 1


def test_residual_bounds_invariant():
    # after each subtraction the residual obeys the floor/ceil bracket
    value = Fraction(14011, 977)
    pattern = SignPattern((1, -1, -1))
    c = value
    for i in range(1, 30):
        b_next = pattern.sign_at(i)
        a = c.numerator // c.denominator if b_next > 0 else -((-c.numerator) // c.denominator)
        c = c - a
        if b_next > 0:
            assert 0 <= c < 1
        else:
            assert -1 < c <= 0
        if c == 0:
            break
        c = pattern.sign_at(i) / c
    sample = extract_signed_cf(value, pattern, 30)
    assert sample.terminated
    assert rebuild_value(sample) == value


def test_round_trip_random_rationals():
    rng = random.Random(2024)
    for _ in range(300):
        num = rng.randint(-10**6, 10**6)
        den = rng.randint(1, 10**6)
        value = Fraction(num, den)
        period = rng.randint(1, 4)
        pattern = SignPattern(tuple(rng.choice([-1, 1]) for _ in range(period)))
        sample = extract_signed_cf(value, pattern, 400)
        assert sample.terminated, f"rational should terminate: {value} {pattern}"
        assert rebuild_value(sample) == value


def test_plus_pattern_matches_euclid_oracle():
    rng = random.Random(99)
    for _ in range(300):
        value = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        sample = extract_signed_cf(value, PLUS, 500)
        assert list(sample.terms) == euclidean_cf(value)


def test_precision_exhaustion_is_reported_not_fabricated():
    e_low = evaluate_constant(ConstantSpec.catalog("e"), 12)
    sample = extract_signed_cf(e_low, PLUS, 50)
    assert sample.precision_exhausted_at is not None
    assert len(sample.terms) < 51
    # every certified term agrees with a high-precision run
    e_high = evaluate_constant(ConstantSpec.catalog("e"), 400)
    full = extract_signed_cf(e_high, PLUS, 50)
    assert full.terms[: len(sample.terms)] == sample.terms


def test_truncated_catalog_round_trip_within_guarantee():
    # the finite CF matches the input to its own convergent accuracy
    # (|value - p/q| is of order 1/q^2 for unit numerators), and re-extracting
    # from the rebuilt rational reproduces every certified term
    for name in ("e", "tan_1", "phi"):
        c = evaluate_constant(ConstantSpec.catalog(name), 200)
        for pattern in (PLUS, SignPattern((-1,)), SignPattern((-1, 1))):
            sample = extract_signed_cf(c, pattern, 60)
            rebuilt = rebuild_value(sample)
            lo, hi = c.interval()
            gap = max(abs(rebuilt - lo), abs(rebuilt - hi))
            assert gap < Fraction(16, rebuilt.denominator**2)
            # re-extraction reproduces the terms (the classical tail ambiguity
            # can fold the final "..., a, 1" into "..., a+1")
            again = extract_signed_cf(rebuilt, pattern, 60)
            keep = len(sample.terms) - 2
            assert again.terms[:keep] == sample.terms[:keep]

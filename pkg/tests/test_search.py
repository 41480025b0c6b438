import json
import random
from fractions import Fraction

import pytest

from cfconj.constants import ConstantSpec, evaluate_constant
from cfconj.intpoly import Poly
from cfconj.recurrence import LinearRecurrence
from cfconj.search import (
    Conjecture,
    RationalFunction,
    SearchSpace,
    conjectures_from_json,
    conjectures_to_json,
    dedupe_conjectures,
    enumerate_rational_functions,
    enumerate_sign_patterns,
    run_search,
    verify_conjecture,
)
from cfconj.sicf import SignPattern


def test_rational_function_canonicalization():
    rf = RationalFunction.make(Poly((2, 2)), Poly((-2,)))
    assert rf.f == Poly((-1, -1)) and rf.g == Poly((1,))
    assert RationalFunction.make(Poly((1, 1)), Poly((2, 2))) is None  # constant value
    assert RationalFunction.make(Poly((0,)), Poly((1, 3))) is None  # zero
    assert RationalFunction.make(Poly((1,)), Poly()) is None  # zero denominator
    # common polynomial factor is removed: (x^2-1)/(x-1) = x+1
    rf2 = RationalFunction.make(Poly((-1, 0, 1)), Poly((-1, 1)))
    assert rf2.f == Poly((1, 1)) and rf2.g == Poly((1,))


def test_degree_zero_space_is_empty():
    assert list(enumerate_rational_functions(0, 1)) == []


def test_enumeration_count_m1_l1_frozen():
    # brute-force enumerate, canonicalize, dedupe: frozen regression constant
    assert sum(1 for _ in enumerate_rational_functions(1, 1)) == 24


def test_enumeration_contains_known_target():
    wanted = RationalFunction.make(Poly((2, 2)), Poly((-1, 3)))
    assert wanted is not None
    assert any(rf == wanted for rf in enumerate_rational_functions(1, 3))


def test_enumeration_deterministic_and_unique():
    first = list(enumerate_rational_functions(1, 2))
    second = list(enumerate_rational_functions(1, 2))
    assert first == second
    assert len({(rf.f.coeffs, rf.g.coeffs) for rf in first}) == len(first)
    # no two entries share a rational value: cross-multiplication check
    for i, a in enumerate(first[:60]):
        for b in first[i + 1 : 60]:
            assert a.f * b.g != b.f * a.g


def test_sign_pattern_enumeration():
    raw = list(enumerate_sign_patterns(5, dedupe=False))
    assert len(raw) == 62  # 2 + 4 + 8 + 16 + 32
    deduped = list(enumerate_sign_patterns(2))
    assert [p.signs for p in deduped] == [(1,), (-1,), (1, -1), (-1, 1)]
    assert all(p.reduced() == p for p in enumerate_sign_patterns(4))


def test_search_space_validation_and_complexity():
    space = SearchSpace(max_degree=1, coeff_bound=3, max_sign_period=5, depth=50)
    assert space.complexity_estimate() == 7**4 * 2**5 * 2500
    with pytest.raises(Exception):
        SearchSpace(max_degree=1, coeff_bound=0)


PHI_SPACE = SearchSpace(max_degree=1, coeff_bound=1, max_sign_period=2, depth=40, verify_digits=250)


@pytest.fixture(scope="module")
def phi_results():
    return run_search(ConstantSpec.catalog("phi"), PHI_SPACE)


def test_search_finds_periodic_cf_of_phi():
    # the raw emission contains the plain golden-ratio CF itself
    raw = run_search(ConstantSpec.catalog("phi"), PHI_SPACE, dedupe=False)
    gold = [c for c in raw if c.rational_function.f == Poly((0, 1))
            and c.rational_function.g == Poly((1,)) and c.sign_pattern.signs == (1,)]
    assert gold, "the plain golden-ratio CF should be found"
    rec = gold[0].recurrence
    assert rec.L == 1 and rec.connection == (-1,) and rec.initial == (1,)


def test_search_deterministic_byte_identical(phi_results):
    again = run_search(ConstantSpec.catalog("phi"), PHI_SPACE)
    assert conjectures_to_json(phi_results) == conjectures_to_json(again)


def test_records_round_trip_and_reverify(phi_results):
    payload = conjectures_to_json(phi_results)
    loaded = conjectures_from_json(payload)
    assert conjectures_to_json(loaded) == payload
    result = verify_conjecture(loaded[0])
    assert result.verified and result.digits == 250


def test_perturbed_initial_condition_is_rejected(phi_results):
    conj = phi_results[0]
    rec = conj.recurrence
    bumped = LinearRecurrence(
        rec.L,
        rec.connection,
        (rec.initial[0] + 1,) + rec.initial[1:],
        rec.prime,
    )
    from dataclasses import replace

    broken = replace(conj, recurrence=bumped)
    result = verify_conjecture(broken)
    assert not result.verified
    assert result.mismatch_at is not None and result.mismatch_at <= 5


def test_monotonicity_in_coeff_bound(phi_results):
    bigger = run_search(
        ConstantSpec.catalog("phi"),
        SearchSpace(max_degree=1, coeff_bound=2, max_sign_period=2, depth=40, verify_digits=250),
    )
    # every tail class found at the smaller bound appears at the larger bound
    from cfconj.search import _tail_pairs, _tails_equivalent

    for small in phi_results:
        t_small = _tail_pairs(small)
        assert any(_tails_equivalent(t_small, _tail_pairs(big)) for big in bigger)


def test_dedupe_prefers_smallest_function():
    space = SearchSpace(max_degree=1, coeff_bound=1, max_sign_period=1, depth=40, verify_digits=200)
    raw = run_search(ConstantSpec.catalog("e"), space, dedupe=False)
    deduped = dedupe_conjectures(raw)
    assert len(deduped) < len(raw)
    reps = {(c.rational_function.f.coeffs, c.rational_function.g.coeffs) for c in deduped}
    assert ((-1, 1), (1,)) in reps  # x - 1 represents the e tail family


def test_rational_values_are_skipped():
    # a catalog-free rational constant yields no conjectures (terminating CFs)
    space = SearchSpace(max_degree=1, coeff_bound=1, max_sign_period=1, depth=30, verify_digits=100)
    res = run_search(ConstantSpec.rational(Fraction(22, 7)), space)
    assert res == []


def test_search_created_at_defaults_to_none(phi_results):
    assert all(c.created_at is None for c in phi_results)
    assert all(json.loads(conjectures_to_json([c]))[0]["created_at"] is None for c in phi_results[:2])

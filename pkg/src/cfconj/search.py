"""Conjecture search: enumerate rational functions of a constant and sign
patterns, extract signed CFs, detect linear recurrences, and verify survivors
to a high digit budget.

Candidates are independent work items; results are aggregated, deduplicated
by tail equivalence (distinct rational functions whose layer streams agree
past their heads describe the same conjecture up to a Mobius map), and sorted
into a deterministic order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .cf import GeneralizedCF, convergent_stream, digits_per_term, CFError, PrecisionError, ExactMatchError
from .constants import ConstantSpec, DecimalConstant, evaluate_constant
from .extraction import SequenceSample, extract_signed_cf
from .intpoly import Poly, poly_divexact, poly_gcd
from .recurrence import (
    LinearRecurrence,
    extend_sequence,
    find_recurrence,
    interlace_decompose,
    is_significant,
)
from .sicf import (
    InterlacedClosedForm,
    SignPattern,
    form_from_json,
    form_to_json,
    to_general_cf,
)

VERIFY_MARGIN_DIGITS = 100
MAX_VERIFY_DEPTH = 20_000


class SearchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """f(x)/g(x) with integer-polynomial numerator and denominator.

    Canonical form: no common polynomial factor, joint content 1, leading
    coefficient of g positive.  Constant-valued functions are rejected.
    """

    f: Poly
    g: Poly

    @classmethod
    def make(cls, f: Poly, g: Poly) -> "RationalFunction | None":
        if g.is_zero():
            return None
        common = poly_gcd(f, g)
        if common.degree >= 1:
            f = poly_divexact(f, common)
            g = poly_divexact(g, common)
        if f.is_zero() or (f.is_constant() and g.is_constant()):
            return None
        # proportional f, g (constant value) are excluded
        if f.degree == g.degree and f.degree >= 0:
            cross = f * Poly.const(g.lead) - g * Poly.const(f.lead)
            if cross.is_zero():
                return None
        content = gcd(f.content(), g.content())
        if content > 1:
            f = Poly(tuple(c // content for c in f.coeffs))
            g = Poly(tuple(c // content for c in g.coeffs))
        if g.lead < 0:
            f, g = -f, -g
        return cls(f, g)

    def value_interval(self, constant: DecimalConstant) -> tuple[Fraction, Fraction]:
        lo, hi = constant.interval()
        values = []
        for x in (lo, hi):
            den = Fraction(self.g(x))
            if den == 0:
                raise ZeroDivisionError("denominator vanishes on the constant enclosure")
            values.append(Fraction(self.f(x)) / den)
        d_lo, d_hi = self.g(lo), self.g(hi)
        if (d_lo > 0) != (d_hi > 0):
            raise ZeroDivisionError("denominator changes sign on the constant enclosure")
        return (min(values), max(values))

    def key(self) -> tuple:
        """Canonical ordering: smallest coefficients, then simplest denominator,
        positive-leading numerator, then lexicographic."""
        bound = max(max(abs(c) for c in self.f.coeffs), max(abs(c) for c in self.g.coeffs))
        return (bound, self.g.degree, self.f.lead < 0, self.f.coeffs, self.g.coeffs)

    def __str__(self) -> str:
        from .intpoly import format_poly

        return f"({format_poly(self.f, 'x')})/({format_poly(self.g, 'x')})"

    def to_json(self) -> dict:
        return {"f": list(self.f.coeffs), "g": list(self.g.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls(Poly(tuple(data["f"])), Poly(tuple(data["g"])))


def enumerate_rational_functions(max_degree: int, coeff_bound: int) -> Iterator[RationalFunction]:
    """Canonical deduplicated stream, deterministic order.

    Covers all f, g of degree <= max_degree with coefficients in
    [-coeff_bound, coeff_bound]; constants are dropped and each rational
    value appears exactly once.
    """
    if max_degree < 0 or coeff_bound < 1:
        raise SearchError("need max_degree >= 0 and coeff_bound >= 1")
    rng = range(-coeff_bound, coeff_bound + 1)
    seen: set[tuple] = set()
    for g_coeffs in itertools.product(rng, repeat=max_degree + 1):
        g = Poly(g_coeffs)
        if g.is_zero():
            continue
        for f_coeffs in itertools.product(rng, repeat=max_degree + 1):
            rf = RationalFunction.make(Poly(f_coeffs), g)
            if rf is None:
                continue
            ident = (rf.f.coeffs, rf.g.coeffs)
            if ident in seen:
                continue
            seen.add(ident)
            yield rf


def enumerate_sign_patterns(max_period: int, dedupe: bool = True) -> Iterator[SignPattern]:
    """All +-1 tuples of period 1..max_period; with ``dedupe`` a pattern whose
    infinite expansion equals a shorter pattern's expansion is emitted once."""
    if max_period < 1:
        raise SearchError("need max_period >= 1")
    for period in range(1, max_period + 1):
        for signs in itertools.product((1, -1), repeat=period):
            pattern = SignPattern(signs)
            if dedupe and pattern.reduced().period != period:
                continue
            yield pattern


# ---------------------------------------------------------------------------
# search space and conjecture records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    max_degree: int = 1
    coeff_bound: int = 3
    max_sign_period: int = 5
    depth: int = 50
    verify_digits: int = 1000
    prime: int = 199

    def __post_init__(self) -> None:
        if min(self.max_degree + 1, self.coeff_bound, self.max_sign_period, self.depth, self.verify_digits, self.prime) < 1:
            raise SearchError("all search-space parameters must be positive")

    def complexity_estimate(self) -> int:
        """Candidate-work bound: (2L+1)^(2(m+1)) * 2^max_period * depth^2."""
        return (2 * self.coeff_bound + 1) ** (2 * (self.max_degree + 1)) * 2**self.max_sign_period * self.depth**2

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "coeff_bound": self.coeff_bound,
            "max_sign_period": self.max_sign_period,
            "depth": self.depth,
            "verify_digits": self.verify_digits,
            "prime": self.prime,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SearchSpace":
        return cls(**{k: int(v) for k, v in data.items()})


@dataclass(frozen=True)
class Conjecture:
    constant: ConstantSpec
    rational_function: RationalFunction
    sign_pattern: SignPattern
    recurrence: LinearRecurrence
    closed_form: InterlacedClosedForm | None
    verified_digits: int
    rate: float | None
    search_params: SearchSpace
    created_at: str | None = None

    def to_json(self) -> dict:
        return {
            "constant": self.constant.to_json(),
            "rational_function": self.rational_function.to_json(),
            "sign_pattern": list(self.sign_pattern.signs),
            "recurrence": {
                "L": self.recurrence.L,
                "connection": list(self.recurrence.connection),
                "initial": list(self.recurrence.initial),
                "prime": self.recurrence.prime,
            },
            "closed_form": form_to_json(self.closed_form) if self.closed_form else None,
            "verified_digits": self.verified_digits,
            "rate": self.rate,
            "search_params": self.search_params.to_json(),
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Conjecture":
        rec = data["recurrence"]
        return cls(
            constant=ConstantSpec.from_json(data["constant"]),
            rational_function=RationalFunction.from_json(data["rational_function"]),
            sign_pattern=SignPattern(tuple(data["sign_pattern"])),
            recurrence=LinearRecurrence(
                int(rec["L"]),
                tuple(rec["connection"]),
                tuple(rec["initial"]),
                int(rec["prime"]),
            ),
            closed_form=form_from_json(data["closed_form"]) if data.get("closed_form") else None,
            verified_digits=int(data["verified_digits"]),
            rate=data.get("rate"),
            search_params=SearchSpace.from_json(data["search_params"]),
            created_at=data.get("created_at"),
        )

    def cf_stream(self, depth: int) -> GeneralizedCF:
        """Rebuild the CF from the stored recurrence alone."""
        terms = extend_sequence(self.recurrence, depth + 1)
        pattern = self.sign_pattern
        layers = [(terms[j], pattern.sign_at(j)) for j in range(1, len(terms))]
        return GeneralizedCF.from_layers(terms[0], layers, f"conjecture {self.rational_function}")

    def sort_key(self) -> tuple:
        return (self.rational_function.key(), self.sign_pattern.signs)


def conjectures_to_json(records: Sequence[Conjecture]) -> str:
    return json.dumps([r.to_json() for r in records], indent=2, sort_keys=True) + "\n"


def conjectures_from_json(text: str) -> list[Conjecture]:
    return [Conjecture.from_json(d) for d in json.loads(text)]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    verified: bool
    digits: int
    mismatch_at: int | None = None
    depth_used: int = 0
    detail: str = ""


def _cf_value_to_digits(cf: GeneralizedCF, digits: int, max_depth: int = MAX_VERIFY_DEPTH) -> tuple[Fraction, int] | None:
    """First convergent whose gap to its successor is below 10**-digits.

    For +-1 numerators the determinant identity makes the successive-convergent
    gap exactly 1/|q_j q_{j+1}|, a sound proxy for the remaining error once the
    denominators grow steadily.  Returns None when the stream ends or the
    depth bound is reached before the criterion is met.
    """
    threshold = Fraction(1, 10**digits)
    prev = None
    for conv in convergent_stream(cf):
        if conv.depth > max_depth:
            return None
        if prev is not None and prev.q != 0 and conv.q != 0:
            gap = Fraction(1, abs(prev.q * conv.q))
            if gap < threshold:
                return prev.value(), prev.depth
        prev = conv
    return None


def verify_conjecture(conj: Conjecture, digits: int | None = None) -> VerifyResult:
    """Re-verify a stored record from scratch: re-evaluate the constant,
    rebuild the CF from the recurrence, and compare to the digit budget."""
    digits = digits or conj.search_params.verify_digits
    constant = evaluate_constant(conj.constant, digits + VERIFY_MARGIN_DIGITS)
    try:
        lo, hi = conj.rational_function.value_interval(constant)
    except ZeroDivisionError as exc:
        return VerifyResult(False, 0, detail=str(exc))
    depth_guess = max(conj.search_params.depth * 4, 400)
    got = None
    while got is None and depth_guess <= MAX_VERIFY_DEPTH:
        cf = conj.cf_stream(depth_guess)
        got = _cf_value_to_digits(cf, digits + 10, max_depth=depth_guess)
        depth_guess *= 4
    if got is None:
        return VerifyResult(False, 0, detail=f"depth bound reached before {digits} digits")
    approx, depth_used = got
    width = hi - lo
    dist = max(lo - approx, approx - hi, Fraction(0))
    if dist < Fraction(1, 10**digits):
        return VerifyResult(True, digits, depth_used=depth_used)
    # first decimal digit where the claim breaks
    err = dist + width
    k = 0
    probe = Fraction(1)
    while probe > err and k <= digits:
        probe /= 10
        k += 1
    return VerifyResult(False, digits, mismatch_at=k, depth_used=depth_used, detail="value mismatch")


# ---------------------------------------------------------------------------
# the search itself
# ---------------------------------------------------------------------------


@dataclass
class CandidateOutcome:
    conjecture: Conjecture | None
    skipped: str = ""


def _examine_candidate(
    rf: RationalFunction,
    pattern: SignPattern,
    constant_spec: ConstantSpec,
    constant: DecimalConstant,
    space: SearchSpace,
) -> CandidateOutcome:
    try:
        interval = rf.value_interval(constant)
    except ZeroDivisionError as exc:
        return CandidateOutcome(None, f"pole: {exc}")
    sample = extract_signed_cf(interval, pattern, space.depth)
    if sample.terminated:
        return CandidateOutcome(None, "rational value")
    if len(sample.terms) < 8:
        return CandidateOutcome(None, "sample too short")
    rec = find_recurrence(sample.terms, primes=_ladder_for(space.prime))
    if not is_significant(rec.L, len(sample.terms)):
        return CandidateOutcome(None, "register not significant")
    if not rec.lifted:
        return CandidateOutcome(None, "no integer lift")
    conj = Conjecture(
        constant=constant_spec,
        rational_function=rf,
        sign_pattern=pattern,
        recurrence=rec,
        closed_form=None,
        verified_digits=0,
        rate=None,
        search_params=space,
    )
    check = verify_conjecture(conj, space.verify_digits)
    if not check.verified:
        return CandidateOutcome(None, f"verification failed ({check.detail or check.mismatch_at})")
    closed = interlace_decompose(rec, list(sample.terms), pattern)
    rate = _rate_of(conj, interval, space)
    return CandidateOutcome(
        replace(conj, closed_form=closed, verified_digits=space.verify_digits, rate=rate)
    )


def _ladder_for(primary: int) -> tuple[int, ...]:
    from .recurrence import PRIME_LADDER

    ladder = [primary] + [p for p in PRIME_LADDER if p != primary]
    return tuple(ladder)


def _rate_of(conj: Conjecture, interval: tuple[Fraction, Fraction], space: SearchSpace) -> float | None:
    lo, hi = interval
    target = (lo + hi) / 2
    try:
        return digits_per_term(conj.cf_stream(140), target, (0, 100))
    except (CFError, ValueError):
        return None


def _tail_pairs(conj: Conjecture, length: int = 60) -> list[tuple[int, int]]:
    """Layer stream (a_j, b_j) past the off-pattern head of the recurrence."""
    drop = max(2 * conj.recurrence.L, 2)
    terms = extend_sequence(conj.recurrence, drop + length + 1)
    return [(terms[j], conj.sign_pattern.sign_at(j)) for j in range(max(drop, 1), len(terms))]


def _tails_equivalent(t1: list[tuple[int, int]], t2: list[tuple[int, int]], max_shift: int = 24) -> bool:
    for shift in range(max_shift + 1):
        k = min(len(t1) - shift, len(t2))
        if k >= 16 and all(t1[shift + i] == t2[i] for i in range(k)):
            return True
        k = min(len(t2) - shift, len(t1))
        if k >= 16 and all(t2[shift + i] == t1[i] for i in range(k)):
            return True
    return False


def dedupe_conjectures(records: list[Conjecture]) -> list[Conjecture]:
    """Keep one representative per tail-equivalence class: the rational
    function with the smallest coefficient bound, ties broken lexicographically."""
    groups: list[list[Conjecture]] = []
    tails: list[list[tuple[int, int]]] = []
    for conj in sorted(records, key=Conjecture.sort_key):
        tail = _tail_pairs(conj)
        for i, ref in enumerate(tails):
            if _tails_equivalent(ref, tail):
                groups[i].append(conj)
                break
        else:
            groups.append([conj])
            tails.append(tail)
    return sorted((min(g, key=Conjecture.sort_key) for g in groups), key=Conjecture.sort_key)


def run_search(
    constant_spec: ConstantSpec,
    space: SearchSpace,
    jobs: int = 1,
    raw_patterns: bool = False,
    dedupe: bool = True,
    progress=None,
) -> list[Conjecture]:
    """Full pipeline for one constant; deterministic sorted output.

    Per-candidate failures (poles, precision exhaustion, failed verification)
    are skipped, never fatal.  ``raw_patterns`` disables sign-pattern
    deduplication for raw-count comparisons; ``dedupe`` controls tail-class
    deduplication of the results.
    """
    constant = evaluate_constant(constant_spec, space.verify_digits + VERIFY_MARGIN_DIGITS)
    candidates = [
        (rf, pattern)
        for rf in enumerate_rational_functions(space.max_degree, space.coeff_bound)
        for pattern in enumerate_sign_patterns(space.max_sign_period, dedupe=not raw_patterns)
    ]
    outcomes: list[Conjecture] = []
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_examine_candidate, rf, pattern, constant_spec, constant, space)
                for rf, pattern in candidates
            ]
            for i, fut in enumerate(futures):
                out = fut.result()
                if out.conjecture is not None:
                    outcomes.append(out.conjecture)
                if progress:
                    progress(i + 1, len(candidates))
    else:
        for i, (rf, pattern) in enumerate(candidates):
            out = _examine_candidate(rf, pattern, constant_spec, constant, space)
            if out.conjecture is not None:
                outcomes.append(out.conjecture)
            if progress:
                progress(i + 1, len(candidates))
    if dedupe:
        outcomes = dedupe_conjectures(outcomes)
    return sorted(outcomes, key=Conjecture.sort_key)

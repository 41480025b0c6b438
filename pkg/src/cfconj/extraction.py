"""Signed continued-fraction extraction.

Generalizes the Euclidean algorithm: for a periodic +-1 numerator pattern,
the integer part is taken with floor when the next numerator is +1 and with
ceil when it is -1, so the residual stays in [0,1) or (-1,0] respectively.

The residual is tracked as an exact rational interval bracketing the true
constant.  Whenever the floor (or ceil) of the two endpoints disagrees, the
remaining digits cannot be trusted and extraction stops, reporting the usable
prefix; no term is ever emitted that the input precision cannot guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constants import DecimalConstant
from .sicf import SignPattern

DEFAULT_DEPTH = 50


@dataclass(frozen=True)
class SequenceSample:
    """Extracted a_0..a_N for one (constant, sign pattern) pair."""

    terms: tuple[int, ...]
    pattern: SignPattern
    terminated: bool = False
    precision_exhausted_at: int | None = None

    def __len__(self) -> int:
        return len(self.terms)


class _Rat:
    """Unnormalized num/den pair with den > 0; avoids per-op gcd cost."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def floor(self) -> int:
        return self.num // self.den

    def ceil(self) -> int:
        return -((-self.num) // self.den)

    def sub_int(self, a: int) -> "_Rat":
        return _Rat(self.num - a * self.den, self.den)

    def inv_scaled(self, b: int) -> "_Rat":
        # b / self  for b = +-1
        return _Rat(b * self.den, self.num)

    def is_zero(self) -> bool:
        return self.num == 0

    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    def eq(self, other: "_Rat") -> bool:
        return self.num * other.den == other.num * self.den


def _as_interval(value) -> tuple[_Rat, _Rat]:
    if isinstance(value, DecimalConstant):
        lo, hi = value.interval()
        return _Rat(lo.numerator, lo.denominator), _Rat(hi.numerator, hi.denominator)
    if isinstance(value, tuple):
        lo, hi = (Fraction(v) for v in value)
        return _Rat(lo.numerator, lo.denominator), _Rat(hi.numerator, hi.denominator)
    v = Fraction(value)
    r = _Rat(v.numerator, v.denominator)
    return r, _Rat(v.numerator, v.denominator)


def extract_signed_cf(
    value: DecimalConstant | Fraction | int | tuple,
    pattern: SignPattern,
    depth: int = DEFAULT_DEPTH,
) -> SequenceSample:
    """Extract a_0..a_depth of the signed CF of ``value`` for ``pattern``.

    Exact rational inputs terminate exactly when the residual hits zero;
    interval inputs stop early (precision_exhausted_at) once the enclosure no
    longer pins the next integer part.
    """
    lo, hi = _as_interval(value)
    exact = lo.eq(hi)
    terms: list[int] = []

    def rounded(i_next: int) -> int | None:
        if pattern.sign_at(i_next) > 0:
            flo, fhi = lo.floor(), hi.floor()
        else:
            flo, fhi = lo.ceil(), hi.ceil()
        return flo if exact or flo == fhi else None

    a0 = rounded(1)
    if a0 is None:
        return SequenceSample((), pattern, precision_exhausted_at=0)
    terms.append(a0)
    lo, hi = lo.sub_int(a0), hi.sub_int(a0)

    for i in range(1, depth + 1):
        if exact and lo.is_zero():
            return SequenceSample(tuple(terms), pattern, terminated=True)
        if not exact and lo.sign() != hi.sign():
            # enclosure straddles zero: either a termination we cannot see,
            # or too few digits to keep going
            return SequenceSample(tuple(terms), pattern, precision_exhausted_at=i)
        b = pattern.sign_at(i)
        lo, hi = lo.inv_scaled(b), hi.inv_scaled(b)
        if lo.num * hi.den > hi.num * lo.den:
            lo, hi = hi, lo
        a = rounded(i + 1)
        if a is None:
            return SequenceSample(tuple(terms), pattern, precision_exhausted_at=i)
        terms.append(a)
        lo, hi = lo.sub_int(a), hi.sub_int(a)

    return SequenceSample(tuple(terms), pattern)


def rebuild_value(sample: SequenceSample) -> Fraction:
    """Finite CF value of an extracted sample (convergent recursion)."""
    if not sample.terms:
        raise ValueError("empty sample")
    p_prev, p = 1, sample.terms[0]
    q_prev, q = 0, 1
    for j, a in enumerate(sample.terms[1:], start=1):
        b = sample.pattern.sign_at(j)
        p_prev, p = p, a * p + b * p_prev
        q_prev, q = q, a * q + b * q_prev
    return Fraction(p, q)


def euclidean_cf(value: Fraction, limit: int = 10_000) -> list[int]:
    """Classical simple-CF terms of an exact rational (independent oracle)."""
    out: list[int] = []
    num, den = value.numerator, value.denominator
    for _ in range(limit):
        a, r = divmod(num, den)
        out.append(a)
        if r == 0:
            break
        num, den = den, r
    return out

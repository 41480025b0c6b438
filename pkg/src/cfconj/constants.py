"""Certified decimal evaluation of the target-constant catalog.

Every catalog constant is computed from an integer series with an explicit
remainder bound: the evaluators return scaled-integer enclosures
``[lo, hi]`` with ``true * 10**P in [lo, hi]``, and the public entry points
only emit digits once the enclosure pins the truncated decimal string.  No
floats and no external decimal sources take part anywhere in the pipeline.

Digit strings are truncations (toward zero), never roundings, so the digits
produced at a small budget are a verbatim prefix of any larger budget.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable

GUARD_DIGITS = 20
DEFAULT_MAX_DIGITS = 10_100

Enclosure = tuple[int, int]  # lo, hi at an agreed power-of-ten scale


class ConstantError(ValueError):
    """Unknown catalog name, unparsable user value, or budget overflow."""


# ---------------------------------------------------------------------------
# scaled-integer enclosure arithmetic
# ---------------------------------------------------------------------------


def _div_enclosure(num: Enclosure, den: Enclosure, scale: int) -> Enclosure:
    """Enclosure of num/den at the same scale; den must not straddle zero."""
    nlo, nhi = num
    dlo, dhi = den
    if dlo <= 0 <= dhi:
        raise ZeroDivisionError("denominator enclosure contains zero")
    candidates = []
    for n in (nlo, nhi):
        for d in (dlo, dhi):
            candidates.append(Fraction(n * scale, d))
    lo = min(candidates)
    hi = max(candidates)
    return (lo.numerator // lo.denominator, -((-hi.numerator) // hi.denominator))


def _mobius_enclosure(a: int, b: int, c: int, d: int, x: Enclosure, scale: int) -> Enclosure:
    """Enclosure of (a x + b)/(c x + d) for x in the given enclosure."""
    xlo, xhi = x
    num = (a * xlo + b * scale, a * xhi + b * scale)
    den = (c * xlo + d * scale, c * xhi + d * scale)
    if num[0] > num[1]:
        num = (num[1], num[0])
    if den[0] > den[1]:
        den = (den[1], den[0])
    return _div_enclosure(num, den, scale)


# ---------------------------------------------------------------------------
# series engines (each returns an enclosure of constant * 10**P)
# ---------------------------------------------------------------------------


def _exp_series(p: int, q: int, P: int) -> Enclosure:
    """e**(p/q) for p >= 0, q >= 1 via the factorial series."""
    scale = 10**P
    term = scale
    total = scale
    k = 0
    slack = 0
    while term > 0:
        k += 1
        term = term * p // (q * k)
        total += term
        slack += 1
    # Once the floored term hits zero the true term is < 1; the remaining true
    # tail is below 2 once k > 2p/q, and each floor lost at most 1 unit.
    while k <= 2 * p // q + 2:
        k += 1
        slack += 1
    return (total, total + slack + 4)


def _sin_cos_series(P: int, even: bool) -> Enclosure:
    """sin(1) (odd factorials) or cos(1) (even factorials), alternating."""
    scale = 10**P
    total = scale
    term = scale
    k = 0
    sign = -1
    steps = 0
    while term > 0:
        k += 1
        if even:
            d = (2 * k - 1) * (2 * k)
        else:
            d = (2 * k) * (2 * k + 1)
        term = term // d
        total += sign * term
        sign = -sign
        steps += 1
    # alternating, strictly decreasing magnitudes: truncation error below the
    # first omitted true term (< 1 here), floors contribute <= steps units
    pad = steps + 2
    return (total - pad, total + pad)


def _atan_inv_series(m: int, P: int) -> Enclosure:
    """arctan(1/m) for integer m >= 2, alternating odd series."""
    scale = 10**P
    msq = m * m
    power = scale // m
    total = power
    k = 0
    sign = -1
    steps = 1
    while power > 0:
        k += 1
        power = power // msq
        term = power // (2 * k + 1)
        total += sign * term
        sign = -sign
        steps += 2
        if term == 0 and power == 0:
            break
    pad = steps + 4
    return (total - pad, total + pad)


def _pi(P: int) -> Enclosure:
    work = P + 5
    a5 = _atan_inv_series(5, work)
    a239 = _atan_inv_series(239, work)
    lo = 16 * a5[0] - 4 * a239[1]
    hi = 16 * a5[1] - 4 * a239[0]
    shift = 10**5
    return (lo // shift, -((-hi) // shift))


def _zeta3(P: int) -> Enclosure:
    # 5/2 * sum (-1)^(n-1) / (n^3 C(2n,n)); term ratio < 1/4 throughout.
    scale = 10**P
    total = 0
    binom = 1  # C(0,0)
    n = 0
    sign = 1
    steps = 0
    while True:
        n += 1
        binom = binom * (2 * n - 1) * (2 * n) // (n * n)
        term = (5 * scale) // (2 * n**3 * binom)
        total += sign * term
        sign = -sign
        steps += 1
        if term == 0:
            break
    pad = steps + 4
    return (total - pad, total + pad)


def _sqrt_scaled(m_num: int, m_den: int, P: int) -> Enclosure:
    """sqrt(m_num / m_den) * 10**P, enclosure of width 1."""
    scale_sq = 10 ** (2 * P)
    root = isqrt(m_num * scale_sq // m_den)
    return (root, root + 1)


def _phi(P: int) -> Enclosure:
    r_lo, r_hi = _sqrt_scaled(5, 1, P)
    scale = 10**P
    return ((scale + r_lo) // 2, (scale + r_hi) // 2 + 1)


def _bessel_first_kind(order: int, arg_num: int, arg_den: int, P: int) -> Enclosure:
    """J_order(arg) by the ascending power series with an alternating tail bound."""
    scale = 10**P
    if arg_num == 0:
        v = scale if order == 0 else 0
        return (v, v)
    # t_0 = (x/2)^order / order!
    num = arg_num**order
    den = arg_den**order * 2**order
    for k in range(2, order + 1):
        den *= k
    term = scale * num // den
    total = term
    m = 0
    sign = -1
    steps = 1
    xsq_num = arg_num * arg_num
    xsq_den = 4 * arg_den * arg_den
    while True:
        m += 1
        term = term * xsq_num // (xsq_den * m * (m + order))
        total += sign * term
        sign = -sign
        steps += 1
        # once the ratio drops below 1 the alternating bound applies
        if term == 0 and xsq_num < xsq_den * (m + 1) * (m + 1 + order):
            break
    pad = steps + 4
    return (total - pad, total + pad)


# ---------------------------------------------------------------------------
# decimal constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecimalConstant:
    """A truncation-correct decimal value: |true - value| < 10**-digits.

    ``frac`` always holds exactly ``digits`` characters, and the true constant
    lies in ``[value, value + sign * 10**-digits)``.
    """

    label: str
    digits: int
    sign: int
    int_part: int
    frac: str
    provenance: str

    def __post_init__(self) -> None:
        if len(self.frac) != self.digits:
            raise ValueError("fraction digit count must equal the digit budget")
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")

    def as_fraction(self) -> Fraction:
        mant = self.int_part * 10**self.digits + (int(self.frac) if self.digits else 0)
        return Fraction(self.sign * mant, 10**self.digits)

    def interval(self) -> tuple[Fraction, Fraction]:
        """Exact enclosure of the true constant."""
        v = self.as_fraction()
        ulp = Fraction(1, 10**self.digits)
        return (v, v + ulp) if self.sign > 0 else (v - ulp, v)

    def decimal(self) -> str:
        s = "-" if self.sign < 0 else ""
        if self.digits == 0:
            return f"{s}{self.int_part}"
        return f"{s}{self.int_part}.{self.frac}"

    def __str__(self) -> str:
        return self.decimal()


def _constant_from_mantissa(mantissa: int, digits: int, label: str, provenance: str) -> DecimalConstant:
    sign = -1 if mantissa < 0 else 1
    mag = abs(mantissa)
    int_part, frac = divmod(mag, 10**digits)
    return DecimalConstant(label, digits, sign, int_part, str(frac).rjust(digits, "0"), provenance)


def _certified_truncation(evaluator: Callable[[int], Enclosure], digits: int, label: str, provenance: str) -> DecimalConstant:
    """Run the enclosure evaluator with growing guard until digits are pinned."""
    guard = GUARD_DIGITS
    for _ in range(6):
        P = digits + guard
        lo, hi = evaluator(P)
        shift = 10 ** (P - digits)
        if lo >= 0:
            tlo, thi = lo // shift, hi // shift
        elif hi <= 0:
            tlo, thi = -((-lo) // shift), -((-hi) // shift)
        else:
            if -shift < lo and hi < shift:
                tlo = thi = 0
            else:
                guard += 40
                continue
        if tlo == thi:
            return _constant_from_mantissa(tlo, digits, label, provenance)
        guard += 40
    raise ConstantError(f"could not certify {digits} digits of {label}")


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _tan1(P: int) -> Enclosure:
    work = P + 5
    s = _sin_cos_series(work, even=False)
    c = _sin_cos_series(work, even=True)
    lo, hi = _div_enclosure(s, c, 10**work)
    shift = 10**5
    return (lo // shift, -((-hi) // shift))


def _tanh_quarter(P: int) -> Enclosure:
    # tanh(1/4) = (sqrt(e) - 1) / (sqrt(e) + 1)
    work = P + 5
    scale = 10**work
    r = _exp_series(1, 2, work)
    lo, hi = _mobius_enclosure(1, -1, 1, 1, r, scale)
    shift = 10**5
    return (lo // shift, -((-hi) // shift))


def _bessel_ratio_evaluator(y1: int, y2: int, arg: Fraction) -> Callable[[int], Enclosure]:
    def run(P: int) -> Enclosure:
        work = P + 5
        num = _bessel_first_kind(y1, arg.numerator, arg.denominator, work)
        den = _bessel_first_kind(y2, arg.numerator, arg.denominator, work)
        lo, hi = _div_enclosure(num, den, 10**work)
        shift = 10**5
        return (lo // shift, -((-hi) // shift))

    return run


_CATALOG: dict[str, tuple[str, Callable[[int], Enclosure]]] = {
    "e": ("Euler's number", lambda P: _exp_series(1, 1, P)),
    "e2": ("e squared", lambda P: _exp_series(2, 1, P)),
    "sqrt_e": ("square root of e", lambda P: _exp_series(1, 2, P)),
    "tan_1": ("tangent of 1 radian", _tan1),
    "tanh_quarter": ("hyperbolic tangent of 1/4", _tanh_quarter),
    "phi": ("golden ratio", _phi),
    "sqrt_2": ("square root of 2", lambda P: _sqrt_scaled(2, 1, P)),
    "J0/J1": ("Bessel ratio J0(1)/J1(1)", _bessel_ratio_evaluator(0, 1, Fraction(1))),
    "J1/J2": ("Bessel ratio J1(1)/J2(1)", _bessel_ratio_evaluator(1, 2, Fraction(1))),
    "J1/J3": ("Bessel ratio J1(1)/J3(1)", _bessel_ratio_evaluator(1, 3, Fraction(1))),
    "J3/J5": ("Bessel ratio J3(1)/J5(1)", _bessel_ratio_evaluator(3, 5, Fraction(1))),
    "J5/J3": ("Bessel ratio J5(1)/J3(1)", _bessel_ratio_evaluator(5, 3, Fraction(1))),
    "pi": ("pi (negative control)", _pi),
    "zeta_3": ("Riemann zeta at 3 (negative control)", _zeta3),
}

_BESSEL_RE = re.compile(r"^J(\d+)(?:\((\d+(?:/\d+)?)\))?/J(\d+)(?:\((\d+(?:/\d+)?)\))?$")
_DECIMAL_RE = re.compile(r"^[+-]?\d+(?:\.\d+)?$")
_RATIONAL_RE = re.compile(r"^[+-]?\d+/\d+$")


@dataclass(frozen=True)
class ConstantSpec:
    """Recipe for a target constant: catalog entry, Bessel ratio, or literal."""

    kind: str  # "catalog" | "bessel-ratio" | "user"
    name: str = ""
    orders: tuple[int, int] | None = None
    arg: tuple[int, int] = (1, 1)
    text: str = ""

    @classmethod
    def catalog(cls, name: str) -> "ConstantSpec":
        if name not in _CATALOG:
            raise ConstantError(f"unknown catalog constant {name!r}")
        return cls(kind="catalog", name=name)

    @classmethod
    def bessel_ratio(cls, y1: int, y2: int, arg: Fraction = Fraction(1)) -> "ConstantSpec":
        return cls(kind="bessel-ratio", name=f"J{y1}({arg})/J{y2}({arg})", orders=(y1, y2), arg=(arg.numerator, arg.denominator))

    @classmethod
    def user(cls, text: str) -> "ConstantSpec":
        if not _DECIMAL_RE.match(text.strip()):
            raise ConstantError(f"cannot parse decimal constant {text!r}")
        return cls(kind="user", name="user-supplied", text=text.strip())

    @classmethod
    def rational(cls, value: Fraction) -> "ConstantSpec":
        value = Fraction(value)
        return cls(
            kind="rational",
            name=f"{value.numerator}/{value.denominator}",
            arg=(value.numerator, value.denominator),
        )

    @classmethod
    def parse(cls, text: str) -> "ConstantSpec":
        text = text.strip()
        if text in _CATALOG:
            return cls.catalog(text)
        m = _BESSEL_RE.match(text)
        if m:
            y1, a1, y2, a2 = m.groups()
            arg = Fraction(a1) if a1 else Fraction(1)
            if a2 and Fraction(a2) != arg:
                raise ConstantError("Bessel ratio arguments must match")
            return cls.bessel_ratio(int(y1), int(y2), arg)
        if _RATIONAL_RE.match(text):
            return cls.rational(Fraction(text))
        if _DECIMAL_RE.match(text):
            return cls.user(text)
        raise ConstantError(f"cannot interpret constant spec {text!r}")

    def exact_value(self) -> Fraction | None:
        return Fraction(*self.arg) if self.kind == "rational" else None

    @property
    def label(self) -> str:
        return self.name if self.kind != "user" else "user-supplied"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "name": self.name}
        if self.kind == "bessel-ratio":
            out["orders"] = list(self.orders or ())
            out["arg"] = list(self.arg)
        if self.kind == "user":
            out["text"] = self.text
        if self.kind == "rational":
            out["arg"] = list(self.arg)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConstantSpec":
        kind = data["kind"]
        if kind == "catalog":
            return cls.catalog(data["name"])
        if kind == "bessel-ratio":
            y1, y2 = data["orders"]
            p, q = data["arg"]
            return cls.bessel_ratio(y1, y2, Fraction(p, q))
        if kind == "rational":
            return cls.rational(Fraction(*data["arg"]))
        return cls.user(data["text"])


def list_catalog() -> list[ConstantSpec]:
    """Stable catalog listing (deterministic order)."""
    return [ConstantSpec.catalog(name) for name in _CATALOG]


def catalog_description(name: str) -> str:
    return _CATALOG[name][0]


def evaluate_constant(spec: ConstantSpec, digits: int, max_digits: int = DEFAULT_MAX_DIGITS) -> DecimalConstant:
    """Evaluate to ``digits`` truncation-correct fraction digits."""
    if digits < 1:
        raise ConstantError("digit budget must be positive")
    if digits > max_digits:
        raise ConstantError(f"digit budget {digits} exceeds the configured maximum {max_digits}")
    if spec.kind == "catalog":
        _, evaluator = _CATALOG[spec.name]
        return _certified_truncation(evaluator, digits, spec.name, spec.name)
    if spec.kind == "bessel-ratio":
        y1, y2 = spec.orders or (0, 0)
        evaluator = _bessel_ratio_evaluator(y1, y2, Fraction(*spec.arg))
        return _certified_truncation(evaluator, digits, spec.name, spec.name)
    if spec.kind == "user":
        return _user_constant(spec.text, digits)
    if spec.kind == "rational":
        return constant_from_fraction(Fraction(*spec.arg), digits, spec.name, "exact rational")
    raise ConstantError(f"unknown constant kind {spec.kind!r}")


def eval_bessel_first_kind(order: int, arg: Fraction | int, digits: int, max_digits: int = DEFAULT_MAX_DIGITS) -> DecimalConstant:
    """J_order(arg) for exact rational arg, to the digit budget."""
    if digits < 1:
        raise ConstantError("digit budget must be positive")
    if digits > max_digits:
        raise ConstantError(f"digit budget {digits} exceeds the configured maximum {max_digits}")
    if order < 0:
        raise ConstantError("Bessel order must be non-negative")
    arg = Fraction(arg)
    label = f"J{order}({arg})"
    return _certified_truncation(
        lambda P: _bessel_first_kind(order, arg.numerator, arg.denominator, P), digits, label, label
    )


def _user_constant(text: str, digits: int) -> DecimalConstant:
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("+-")
    int_part, _, frac = body.partition(".")
    if digits > len(frac):
        raise ConstantError(
            f"user constant provides {len(frac)} fraction digits, cannot certify {digits}"
        )
    return DecimalConstant("user-supplied", digits, sign, int(int_part), frac[:digits], "user-supplied")


def constant_from_fraction(value: Fraction, digits: int, label: str = "rational", provenance: str = "exact") -> DecimalConstant:
    """Exact rational -> truncated decimal (truncation toward zero)."""
    mag = abs(value)
    mant = mag.numerator * 10**digits // mag.denominator
    return _constant_from_mantissa((1 if value >= 0 else -1) * mant, digits, label, provenance)

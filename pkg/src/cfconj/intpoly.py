"""Exact univariate polynomials with integer coefficients.

Everything symbolic in this package (collapsed period matrices, folding,
degree prediction, closed-form fitting) runs on these; no floats anywhere.
Coefficients are stored ascending, so ``Poly((2, 0, 1))`` is ``n**2 + 2``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Immutable integer polynomial in a single variable ``n``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = _strip(coeffs)
        if any(not isinstance(c, int) for c in cs):
            raise TypeError("integer coefficients required")
        object.__setattr__(self, "coeffs", cs)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls((c,))

    @classmethod
    def linear(cls, b: int, a: int) -> "Poly":
        """Return ``a*n + b``."""
        return cls((b, a))

    # -- basic queries ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else 0

    def __call__(self, n: Scalar) -> Scalar:
        acc: Scalar = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "Poly | int") -> "Poly":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly | int") -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other: "Poly | int") -> "Poly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Poly":
        """Substitute ``n -> n + k``."""
        if k == 0 or self.is_constant():
            return self
        # Horner in the shifted variable keeps everything integral.
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * Poly((k, 1)) + Poly.const(c)
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    # -- sign analysis ---------------------------------------------------------

    def positive_from(self, bound: int = 1) -> int | None:
        """Smallest ``n0 >= bound`` with ``self(n) > 0`` for every ``n >= n0``.

        Returns None when no such index exists (zero polynomial or negative
        leading coefficient).
        """
        if self.is_zero() or self.lead < 0:
            return None
        if self.is_constant():
            return bound if self.coeffs[0] > 0 else None
        # Cauchy bound: no real root at or beyond 1 + max |c_i / lead|.
        limit = 1 + max(abs(c) for c in self.coeffs) // abs(self.lead) + 1
        n = max(bound, limit)
        while n > bound and self(n - 1) > 0:
            n -= 1
        return n

    def nonnegative_from(self, bound: int = 1) -> int | None:
        """Smallest ``n0 >= bound`` with ``self(n) >= 0`` for every ``n >= n0``."""
        if self.is_zero():
            return bound
        if self.lead < 0:
            return None
        if self.is_constant():
            return bound
        limit = 1 + max(abs(c) for c in self.coeffs) // abs(self.lead) + 1
        n = max(bound, limit)
        while n > bound and self(n - 1) >= 0:
            n -= 1
        return n

    # -- dunder plumbing ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(x: "Poly | int") -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def format_poly(p: Poly, var: str = "n") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for power in range(p.degree, -1, -1):
        c = p.coeffs[power]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            head = "" if mag == 1 else str(mag)
            body = f"{head}{var}" if power == 1 else f"{head}{var}^{power}"
        parts.append(f"{sign}{body}" if not parts else f"{sign} {body}")
    return " ".join(parts)


def fit_integer_poly(points: Sequence[tuple[int, int]], max_degree: int) -> Poly | None:
    """Lowest-degree integer polynomial through ``points``, or None.

    Newton divided differences over exact rationals; a fit is rejected unless
    every monomial coefficient comes out integral and the degree stays within
    ``max_degree``.  All supplied points are interpolated, so callers should
    pass at least ``max_degree + 2`` points to get a verified extrapolation.
    """
    if not points:
        return None
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissae")
    coeffs: list[Fraction] = [Fraction(points[0][1])]
    newton = [Fraction(y) for _, y in points]
    for order in range(1, len(points)):
        nxt: list[Fraction] = []
        for i in range(len(points) - order):
            num = newton[i + 1] - newton[i]
            den = xs[i + order] - xs[i]
            nxt.append(Fraction(num, den))
        newton = nxt
        coeffs.append(newton[0])
    # expand Newton form into monomials
    poly = [Fraction(0)] * len(points)
    basis = [Fraction(1)] + [Fraction(0)] * (len(points) - 1)
    for order, c in enumerate(coeffs):
        for i, b in enumerate(basis):
            poly[i] += c * b
        # multiply basis by (x - xs[order])
        nxt_basis = [Fraction(0)] * len(points)
        for i, b in enumerate(basis):
            if b:
                nxt_basis[i] -= b * xs[order]
                if i + 1 < len(points):
                    nxt_basis[i + 1] += b
        basis = nxt_basis
    while poly and poly[-1] == 0:
        poly.pop()
    if len(poly) - 1 > max_degree:
        return None
    if any(c.denominator != 1 for c in poly):
        return None
    return Poly(tuple(int(c) for c in poly))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic-free gcd over Q, returned with integer coefficients, content 1."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]

    def deg(p: list[Fraction]) -> int:
        return len(p) - 1

    def rem(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
        num = num[:]
        while len(num) >= len(den) and num:
            factor = num[-1] / den[-1]
            offset = len(num) - len(den)
            for i, c in enumerate(den):
                num[offset + i] -= factor * c
            while num and num[-1] == 0:
                num.pop()
        return num

    while fb:
        fa, fb = fb, rem(fa, fb)
    if not fa:
        return Poly()
    # clear denominators, strip content, positive lead
    from math import lcm

    denom = lcm(*(c.denominator for c in fa)) if len(fa) > 1 else fa[0].denominator
    ints = [int(c * denom) for c in fa]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return Poly(ints)


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises if the division leaves a remainder."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    num = [Fraction(c) for c in a.coeffs]
    out = [Fraction(0)] * (max(len(num) - len(b.coeffs) + 1, 0))
    while len(num) >= len(b.coeffs) and num:
        factor = num[-1] / Fraction(b.lead)
        offset = len(num) - len(b.coeffs)
        out[offset] = factor
        for i, c in enumerate(b.coeffs):
            num[offset + i] -= factor * c
        while num and num[-1] == 0:
            num.pop()
    if num:
        raise ValueError("division is not exact")
    if any(c.denominator != 1 for c in out):
        raise ValueError("quotient is not integral")
    return Poly(tuple(int(c) for c in out))

"""Generalized continued fractions: exact convergents, Mobius maps, rates.

A generalized CF is ``a0 + b1/(a1 + b2/(a2 + ...))`` with integer partial
denominators ``a_j`` and partial numerators ``b_j``.  Convergents follow the
classical recursion p_j = a_j p_{j-1} + b_j p_{j-2} (likewise q), seeded with
p_{-1}=1, p_0=a0, q_{-1}=0, q_0=1, and are kept as exact big integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .constants import DecimalConstant, constant_from_fraction
from .intpoly import Poly


class CFError(ValueError):
    pass


class PoleError(CFError):
    """A convergent denominator hit zero at the reported depth."""

    def __init__(self, depth: int):
        super().__init__(f"zero convergent denominator at depth {depth}")
        self.depth = depth


class PrecisionError(CFError):
    """The target constant does not resolve the approximation error."""


class ExactMatchError(CFError):
    """The CF reproduces the target exactly; a convergence rate is undefined."""


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


class Convergent(NamedTuple):
    p: int
    q: int
    depth: int

    def value(self) -> Fraction:
        if self.q == 0:
            raise PoleError(self.depth)
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class GeneralizedCF:
    """Leading term plus a repeatable (a_j, b_j) layer stream.

    ``layer_factory`` must return a fresh iterator on every call so that
    parallel consumers can re-enumerate terms independently.
    """

    a0: int
    layer_factory: Callable[[], Iterator[tuple[int, int]]]
    source: str = ""

    def layers(self) -> Iterator[tuple[int, int]]:
        return self.layer_factory()

    @classmethod
    def from_layers(cls, a0: int, layers: Sequence[tuple[int, int]], source: str = "explicit list") -> "GeneralizedCF":
        frozen = tuple((int(a), int(b)) for a, b in layers)
        for a, b in frozen:
            if b == 0:
                raise CFError("partial numerators must be nonzero")
        return cls(a0, lambda: iter(frozen), source)

    @classmethod
    def simple(cls, terms: Sequence[int], source: str = "simple CF") -> "GeneralizedCF":
        """Classical simple CF [a0; a1, a2, ...] with all b_j = 1."""
        if not terms:
            raise CFError("at least the leading term is required")
        return cls.from_layers(terms[0], [(a, 1) for a in terms[1:]], source)


def convergent_stream(cf: GeneralizedCF) -> Iterator[Convergent]:
    """Yield convergents p_j/q_j for j = 0, 1, 2, ... until layers run out."""
    p_prev, p = 1, cf.a0
    q_prev, q = 0, 1
    yield Convergent(p, q, 0)
    depth = 0
    for a, b in cf.layers():
        depth += 1
        p_prev, p = p, a * p + b * p_prev
        q_prev, q = q, a * q + b * q_prev
        yield Convergent(p, q, depth)


def convergents(cf: GeneralizedCF, depth: int) -> list[Convergent]:
    """Exact convergents for j = 0..depth (depth + 1 entries).

    A zero q_j stays in the list; evaluating at that depth raises PoleError,
    nothing is silently skipped.
    """
    if depth < 1:
        raise CFError("depth must be positive")
    out = []
    for conv in convergent_stream(cf):
        out.append(conv)
        if conv.depth == depth:
            return out
    raise CFError(f"layer stream ended before depth {depth}")


def evaluate_cf(cf: GeneralizedCF, depth: int, digits: int) -> DecimalConstant:
    """Decimal expansion of the depth-th convergent (exact rational -> decimal).

    A layer stream that terminates before ``depth`` is fine: the last
    convergent is the exact value of the finite CF.
    """
    last = None
    for conv in convergent_stream(cf):
        last = conv
        if conv.depth == depth:
            break
    assert last is not None
    return constant_from_fraction(last.value(), digits, cf.source or "cf", "cf-evaluation")


# ---------------------------------------------------------------------------
# Mobius maps and polynomial matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d) with integer entries and ad - bc != 0."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.det == 0:
            raise CFError("Mobius map must have nonzero determinant")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def layer(cls, a: int, b: int) -> "MobiusMap":
        """The CF layer x -> b / (a + x), i.e. the matrix (0 b; 1 a)."""
        return cls(0, b, 1, a)

    @classmethod
    def shift_by(cls, a0: int) -> "MobiusMap":
        return cls(1, a0, 0, 1)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """Matrix product self @ other: apply other first."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __matmul__ = compose

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def reduced(self) -> "MobiusMap":
        g = math.gcd(math.gcd(abs(self.a), abs(self.b)), math.gcd(abs(self.c), abs(self.d)))
        a, b, c, d = (v // g for v in (self.a, self.b, self.c, self.d))
        for lead in (a, b, c, d):
            if lead != 0:
                if lead < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return MobiusMap(a, b, c, d)

    def same_map(self, other: "MobiusMap") -> bool:
        """Projective equality: equal as maps, up to a scalar."""
        return self.reduced() == other.reduced()

    def apply(self, x):
        """Apply to a Fraction/int, INFINITY, or DecimalConstant."""
        if x is INFINITY:
            if self.c == 0:
                return INFINITY
            return Fraction(self.a, self.c)
        if isinstance(x, DecimalConstant):
            return self._apply_constant(x)
        x = Fraction(x)
        den = self.c * x + self.d
        if den == 0:
            raise PoleError(-1)
        return (self.a * x + self.b) / den

    def _apply_constant(self, value: DecimalConstant) -> DecimalConstant:
        lo, hi = value.interval()
        images = []
        for end in (lo, hi):
            den = self.c * end + self.d
            if den == 0:
                raise PoleError(-1)
            images.append((self.a * end + self.b) / den)
        den_signs = {(self.c * lo + self.d) > 0, (self.c * hi + self.d) > 0}
        if len(den_signs) > 1:
            raise PoleError(-1)
        lo2, hi2 = min(images), max(images)
        # largest digit budget the mapped enclosure still certifies
        digits = value.digits
        while digits > 0:
            scale = 10**digits
            flo = lo2.numerator * scale // lo2.denominator
            fhi = hi2.numerator * scale // hi2.denominator
            if flo == fhi:
                return constant_from_fraction(Fraction(flo, scale), digits, value.label, "mobius-image")
            digits -= 1
        raise PrecisionError("no digits certifiable through the map")

    def __str__(self) -> str:
        return f"x -> ({self.a}x{self.b:+d})/({self.c}x{self.d:+d})"


def mobius_apply(mob: MobiusMap, value):
    return mob.apply(value)


@dataclass(frozen=True)
class PolyMatrix:
    """2x2 matrix of integer polynomials in the period index n."""

    c: Poly
    d: Poly
    e: Poly
    f: Poly

    @classmethod
    def identity(cls) -> "PolyMatrix":
        return cls(Poly.const(1), Poly(), Poly(), Poly.const(1))

    @classmethod
    def layer(cls, a: Poly, b: Poly) -> "PolyMatrix":
        """CF layer matrix (0 b; 1 a) with polynomial entries."""
        return cls(Poly(), b, Poly.const(1), a)

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(
            self.c * other.c + self.d * other.e,
            self.c * other.d + self.d * other.f,
            self.e * other.c + self.f * other.e,
            self.e * other.d + self.f * other.f,
        )

    __matmul__ = matmul

    def det(self) -> Poly:
        return self.c * self.f - self.d * self.e

    def shift(self, k: int) -> "PolyMatrix":
        return PolyMatrix(self.c.shift(k), self.d.shift(k), self.e.shift(k), self.f.shift(k))

    def at(self, n: int) -> MobiusMap:
        return MobiusMap(self.c(n), self.d(n), self.e(n), self.f(n))

    def entries(self) -> tuple[Poly, Poly, Poly, Poly]:
        return (self.c, self.d, self.e, self.f)


# ---------------------------------------------------------------------------
# equivalence transform and convergence-rate measurement
# ---------------------------------------------------------------------------


def equivalence_transform(cf: GeneralizedCF, g: Sequence[int] | Callable[[int], int]) -> GeneralizedCF:
    """Rescale layers by a nonzero sequence g (g_0 = 1): a'_j = g_j a_j,
    b'_j = g_{j-1} g_j b_j.  Convergent values are unchanged at every depth.

    A finite list is cycled periodically; a callable is used as g(j) directly.
    """
    if callable(g):
        g_at = g
    else:
        seq = tuple(int(x) for x in g)
        if not seq:
            raise CFError("empty scaling sequence")
        g_at = lambda j: seq[(j - 1) % len(seq)]

    def factory() -> Iterator[tuple[int, int]]:
        prev = 1
        j = 0
        for a, b in cf.layers():
            j += 1
            gj = g_at(j)
            if gj == 0:
                raise CFError(f"zero entry in scaling sequence at {j}")
            yield (gj * a, prev * gj * b)
            prev = gj

    return GeneralizedCF(cf.a0, factory, f"equivalence transform of {cf.source}")


def log10_fraction(x: Fraction) -> float:
    """log10 of a positive rational, accurate to ~1e-12 regardless of size."""
    if x <= 0:
        raise ValueError("log10 of a non-positive value")
    num, den = x.numerator, x.denominator
    nb, db = num.bit_length(), den.bit_length()
    # bring both to <= 64 significant bits, track the shifted-out powers of 2
    ns = max(0, nb - 64)
    ds = max(0, db - 64)
    return math.log10(num >> ns) - math.log10(den >> ds) + (ns - ds) * math.log10(2)


def error_digits(approx: Fraction, target: DecimalConstant | Fraction) -> float:
    """-log10 |approx - target|; raises ExactMatchError on zero error.

    For DecimalConstant targets the distance is measured against the
    enclosure: the call fails with PrecisionError when the error is not
    resolvable at the stored precision.
    """
    if isinstance(target, DecimalConstant):
        lo, hi = target.interval()
        if lo <= approx <= hi:
            raise PrecisionError(
                "approximation error is below the target's stored precision"
            )
        dist = lo - approx if approx < lo else approx - hi
        width = hi - lo
        if width and dist < 4 * width:
            raise PrecisionError(
                "approximation error is too close to the target's stored precision"
            )
        return -log10_fraction(dist)
    diff = approx - target
    if diff == 0:
        raise ExactMatchError("exact match, rate undefined")
    return -log10_fraction(abs(diff))


def digits_per_term(
    cf: GeneralizedCF,
    target: DecimalConstant | Fraction,
    window: tuple[int, int] = (0, 100),
) -> float:
    """Endpoint slope of correct digits per CF term over ``window``.

    rate = (digits(n1) - digits(n0)) / (n1 - n0) with
    digits(n) = -log10 |p_n/q_n - target|.
    """
    n0, n1 = window
    if not (0 <= n0 < n1):
        raise CFError("window must satisfy 0 <= n0 < n1")
    d0 = d1 = None
    for conv in convergent_stream(cf):
        if conv.depth == n0:
            d0 = error_digits(conv.value(), target)
        elif conv.depth == n1:
            d1 = error_digits(conv.value(), target)
            break
    if d0 is None or d1 is None:
        raise ExactMatchError("finite CF terminated inside the window, rate undefined")
    return (d1 - d0) / (n1 - n0)


def convergence_rows(
    cf: GeneralizedCF, target: DecimalConstant | Fraction, depth: int
) -> list[tuple[int, float]]:
    """(depth, log10 error) rows for every convergent up to ``depth``."""
    rows = []
    for conv in convergent_stream(cf):
        if conv.q != 0:
            rows.append((conv.depth, -error_digits(conv.value(), target)))
        if conv.depth == depth:
            break
    return rows

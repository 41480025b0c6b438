"""Continued-fraction algebra passes.

* fold: turn a period-collapsed polynomial matrix product into a polynomial
  CF equal to a Mobius image of the original value.
* predict_degrees: closed-formula degrees of the folded CF for simple
  interlaced sources, cross-checked against the symbolic fold.
* classify_convergence: super-exponential / exponential / divergent / unknown.
* tietze_irrationality: sufficient-condition irrationality certificates.
* sicf_to_simple: rewrite a signed form into an all-positive-numerator form
  through local identities, accumulating the Mobius prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .cf import GeneralizedCF, MobiusMap, PolyMatrix, convergent_stream
from .intpoly import Poly
from .sicf import InterlacedClosedForm, collapse, signed_form, to_general_cf


class TransformError(ValueError):
    pass


class DivergentSourceError(TransformError):
    """The collapsed matrix cannot describe a converging CF."""


# ---------------------------------------------------------------------------
# folding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldResult:
    """Polynomial CF semi-equivalent to the source closed form.

    The folded CF runs over layers (0, b_poly(n); 1, a_poly(n)) for
    n = start_index, start_index+1, ...; its value V satisfies
    source value = mobius(V).  ``mobius`` is the composite of the first
    collapsed matrix, the first conjugation matrix, and the boundary factor
    of the scaling normalization.
    """

    mobius: MobiusMap
    b_poly: Poly
    a_poly: Poly
    start_index: int = 2

    def cf(self) -> GeneralizedCF:
        def factory() -> Iterator[tuple[int, int]]:
            n = self.start_index
            while True:
                yield (int(self.a_poly(n)), int(self.b_poly(n)))
                n += 1

        return GeneralizedCF(0, factory, "folded polynomial CF")

    def value_of_source(self, depth: int) -> Fraction:
        """Mobius image of the folded CF's depth-th convergent."""
        conv = None
        for conv in convergent_stream(self.cf()):
            if conv.depth == depth:
                break
        assert conv is not None
        return self.mobius.apply(conv.value())


def fold(form: InterlacedClosedForm, check_depth: int = 25) -> FoldResult:
    """Fold one period of layer matrices into a polynomial CF.

    Requires the collapsed bottom-left entry e(n) to be nonzero (zero there
    means the matrix product diverges).  The head, including a0, is absorbed
    into the returned Mobius map.  When ``check_depth`` is positive the
    numerical identity source = mobius(folded) is asserted on exact
    convergents before returning.
    """
    M = collapse(form)
    c, d, e, f = M.entries()
    if e.is_zero():
        raise DivergentSourceError("collapsed matrix has e(n) = 0; source diverges")

    minus_det = e * d - c * f  # equals -det(M), a polynomial in n
    b_poly = e.shift(-1) * e.shift(1) * minus_det
    a_poly = e * c.shift(1) + f * e.shift(1)
    if b_poly.is_zero():
        raise DivergentSourceError("folded partial numerator vanishes")

    head_mob = MobiusMap.shift_by(form.a0)
    for a, b in form.head_layers:
        head_mob = head_mob @ MobiusMap.layer(a, b)
    m1 = M.at(1)
    u2 = MobiusMap(1, int(c(2)), 0, int(e(2)))
    boundary = MobiusMap(1, 0, 0, int(e(1)))
    mobius = head_mob @ m1 @ u2 @ boundary

    result = FoldResult(mobius, b_poly, a_poly)
    if check_depth:
        _check_fold(form, result, check_depth)
    return result


def _check_fold(form: InterlacedClosedForm, result: FoldResult, depth: int) -> None:
    """Both sides approximate the same limit: the gap between the deep source
    convergent and the deep mobius-mapped folded convergent must be small
    relative to how much either side still moves on its own."""
    source = to_general_cf(form)
    src = src_next = None
    for conv in convergent_stream(source):
        if conv.depth == depth * form.beta:
            src = conv.value()
        if conv.depth == (depth + 2) * form.beta:
            src_next = conv.value()
            break
    folded = result.value_of_source(depth)
    folded_next = result.value_of_source(depth + 2)
    assert src is not None and src_next is not None
    slack = abs(src - src_next) + abs(folded - folded_next) + Fraction(1, 10**40)
    if abs(folded - src) > 16 * slack:
        raise TransformError("fold self-check failed: mobius relation does not hold")


# ---------------------------------------------------------------------------
# degree prediction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreePrediction:
    deg_b: int
    deg_a: int
    profile: tuple[int, int, int, int]  # degrees of collapsed c, d, e, f


def predict_degrees(form: InterlacedClosedForm) -> DegreePrediction:
    """Degrees of the folded CF of a simple interlaced form, from the formula.

    Requires all B_i = 1, positive A_i, and at least one non-constant A_i;
    all-constant forms belong to the convergence classifier instead.
    """
    if not form.is_simple():
        raise TransformError("degree formula applies to simple interlaced forms")
    degs = [p.degree for p in form.A]
    if any(d < 0 for d in degs):
        raise TransformError("zero partial denominators are not a simple interlaced CF")
    if all(d == 0 for d in degs):
        raise TransformError("all-constant form: use classify_convergence")
    beta = form.beta
    if beta == 1:
        deg_b, deg_a = 0, degs[0]
        profile = (0, 0, 0, degs[0])
        return DegreePrediction(deg_b, deg_a, profile)
    deg_b = sum(2 * d for d in degs[: beta - 1])
    deg_a = deg_b + degs[beta - 1]
    if beta == 2:
        prof_c = 0
    else:
        prof_c = sum(degs[1 : beta - 1])
    profile = (
        prof_c,
        sum(degs[1:beta]),
        sum(degs[: beta - 1]),
        sum(degs),
    )
    return DegreePrediction(deg_b, deg_a, profile)


# ---------------------------------------------------------------------------
# convergence classification
# ---------------------------------------------------------------------------

SUPER_EXPONENTIAL = "super-exponential"
EXPONENTIAL = "exponential"
DIVERGENT = "divergent"
UNKNOWN = "unknown"


def classify_convergence(form: InterlacedClosedForm) -> str:
    """Coarse convergence verdict for an interlaced closed form."""
    M = collapse(form)
    if M.e.is_zero():
        return DIVERGENT
    constant = all(p.is_constant() for p in form.A) and all(p.is_constant() for p in form.B)
    if constant:
        return _classify_constant(M)
    if form.is_simple() and all(p.positive_from(1) == 1 for p in form.A):
        return SUPER_EXPONENTIAL
    return UNKNOWN


def _classify_constant(M: PolyMatrix) -> str:
    c, d, e, f = (p.constant_value() for p in M.entries())
    det = c * f - d * e
    tr = c + f
    if det == -1:
        # eigenvalues tr/2 +- sqrt(tr^2+4)/2, product -1
        return DIVERGENT if tr == 0 else EXPONENTIAL
    if det == 1:
        if tr * tr > 4:
            return EXPONENTIAL
        if tr * tr == 4:
            return UNKNOWN  # Jordan block: rational limit or infinity
        return DIVERGENT  # complex rotation
    # |det| != 1 cannot come from +-1 numerators; judge by eigenvalue split
    disc = tr * tr - 4 * det
    if disc > 0:
        return EXPONENTIAL
    return UNKNOWN


# ---------------------------------------------------------------------------
# irrationality certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TietzeResult:
    verdict: str  # "irrational" | "inconclusive"
    certified_from: int | None = None
    scan_only: bool = False


def tietze_irrationality(
    subject: InterlacedClosedForm | tuple[Sequence[int], Sequence[int]],
    horizon: int | None = None,
) -> TietzeResult:
    """Sufficient irrationality test: a_j >= |b_j|, and a_j >= |b_j| + 1
    whenever b_{j+1} < 0, for all j past some index.

    Closed forms are checked symbolically (fully certified); explicit
    sequences are only scanned up to ``horizon`` and carry a caveat.
    """
    if isinstance(subject, InterlacedClosedForm):
        return _tietze_symbolic(subject)
    a_seq, b_seq = subject
    limit = min(len(a_seq), len(b_seq) - 1, horizon or len(a_seq))
    for j in range(limit):
        a, b, b_next = a_seq[j], b_seq[j], b_seq[j + 1]
        need = abs(b) + (1 if b_next < 0 else 0)
        if a < need:
            return TietzeResult("inconclusive", scan_only=True)
    return TietzeResult("irrational", certified_from=0, scan_only=True)


def _tietze_symbolic(form: InterlacedClosedForm) -> TietzeResult:
    if not form.is_signed():
        return TietzeResult("inconclusive")
    start = 1
    for i in range(form.beta):
        b_next = form.B[(i + 1) % form.beta]
        need = 1 + (1 if b_next.constant_value() < 0 else 0)
        ok_from = (form.A[i] - Poly.const(need)).nonnegative_from(1)
        if ok_from is None:
            return TietzeResult("inconclusive")
        start = max(start, ok_from)
    # head layers sit before the certified region and never matter
    return TietzeResult("irrational", certified_from=start, scan_only=False)


# ---------------------------------------------------------------------------
# signed -> simple rewriting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplifyResult:
    kind: str  # "simple" | "divergent" | "rational" | "budget-exceeded"
    mobius: MobiusMap | None = None
    form: InterlacedClosedForm | None = None
    trace: tuple[int, ...] = ()
    detail: str = ""


class _Word:
    """Mutable periodic word of (A-poly, sign) layers plus a Mobius prefix.

    Maintains: source value = prefix(value of the periodic word stream).
    """

    def __init__(self, form: InterlacedClosedForm):
        if not form.is_signed():
            raise TransformError("rewriting needs +-1 partial numerators")
        self.layers: list[tuple[Poly, int]] = [
            (a, b.constant_value()) for a, b in zip(form.A, form.B)
        ]
        prefix = MobiusMap.shift_by(form.a0)
        for a, b in form.head_layers:
            prefix = prefix @ MobiusMap.layer(a, b)
        self.prefix = prefix

    @property
    def beta(self) -> int:
        return len(self.layers)

    def neg_count(self) -> int:
        return sum(1 for _, b in self.layers if b < 0)

    def to_form(self) -> InterlacedClosedForm:
        return signed_form([a for a, _ in self.layers], [b for _, b in self.layers])

    def rotate(self) -> None:
        """Move the first layer into the prefix; it re-enters at n+1."""
        a, b = self.layers.pop(0)
        self.prefix = self.prefix @ MobiusMap.layer(int(a(1)), b)
        self.layers.append((a.shift(1), b))

    def advance_period(self) -> None:
        """Push one whole period into the prefix (n -> n + 1 everywhere)."""
        for _ in range(self.beta):
            self.rotate()

    def identity1(self, j: int) -> None:
        """(a_{j-1}, b_{j-1}), (a_j, -1) -> (a_{j-1}-1, b_{j-1}), (1, 1), (a_j-1, 1)."""
        if not 2 <= j <= self.beta:
            raise TransformError("identity 1 needs the pair inside the period")
        a_prev, b_prev = self.layers[j - 2]
        a_j, b_j = self.layers[j - 1]
        if b_j != -1:
            raise TransformError("identity 1 expects a -1 numerator at the site")
        self.layers[j - 2 : j] = [
            (a_prev - Poly.const(1), b_prev),
            (Poly.const(1), 1),
            (a_j - Poly.const(1), 1),
        ]

    def identity2(self, k: int) -> None:
        """Remove a zero layer: merge neighbours, period shrinks by 2."""
        if not 2 <= k <= self.beta - 1:
            raise TransformError("identity 2 needs interior neighbours")
        a_prev, b_prev = self.layers[k - 2]
        a_k, b_k = self.layers[k - 1]
        a_next, b_next = self.layers[k]
        if not a_k.is_zero():
            raise TransformError("identity 2 expects a zero partial denominator")
        merged_a = a_next + b_next * b_k * a_prev
        merged_b = b_prev * b_k * b_next
        self.layers[k - 2 : k + 1] = [(merged_a, merged_b)]

    def flip_sign(self, k: int) -> None:
        """Scale position k by -1: negates A_k, B_k and the following B."""
        a_k, b_k = self.layers[k - 1]
        self.layers[k - 1] = (-a_k, -b_k)
        nxt = k % self.beta
        a_n, b_n = self.layers[nxt]
        self.layers[nxt] = (a_n, -b_n)
        if k == self.beta:
            self.prefix = self.prefix @ MobiusMap(1, 0, 0, -1)

    def expand_negative_singleton(self) -> None:
        """beta = 1, sign -1: (a, -1) -> prefix (-1 0; 1 1), layers (a-2, 1), (1, 1)."""
        a, b = self.layers[0]
        assert self.beta == 1 and b == -1
        self.prefix = self.prefix @ MobiusMap(-1, 0, 1, 1)
        self.layers = [(a - Poly.const(2), 1), (Poly.const(1), 1)]


def apply_identity1(form: InterlacedClosedForm, position: int) -> InterlacedClosedForm:
    """Identity-1 rewrite at ``position`` (2..beta) of a headless form."""
    if form.head:
        raise TransformError("rewrite steps operate on headless forms")
    word = _Word(form)
    word.identity1(position)
    return word.to_form()


def apply_identity2(form: InterlacedClosedForm, position: int) -> InterlacedClosedForm:
    """Identity-2 zero-layer elimination at ``position`` (2..beta-1)."""
    if form.head:
        raise TransformError("rewrite steps operate on headless forms")
    word = _Word(form)
    word.identity2(position)
    return word.to_form()


def sicf_to_simple(form: InterlacedClosedForm, budget: int = 64) -> SimplifyResult:
    """Rewrite a signed interlaced CF to an all-plus-one interlaced CF.

    Returns the accumulated Mobius map and the simple form, such that
    source value = mobius(simple value); or the divergent/rational terminal
    verdicts of the degenerate cases.  A rewrite that does not settle within
    ``budget`` iterations is reported as such with the partial state.
    """
    word = _Word(form)
    trace = [word.neg_count()]

    def record() -> None:
        trace.append(word.neg_count())

    for _ in range(budget):
        zero_at = next((i + 1 for i, (a, _) in enumerate(word.layers) if a.is_zero()), None)
        if zero_at is not None:
            if word.beta == 1:
                return SimplifyResult("divergent", trace=tuple(trace), detail="period of zeros")
            if word.beta == 2:
                return SimplifyResult("rational", trace=tuple(trace), detail="two-layer zero period")
            _eliminate_zero(word, zero_at)
            record()
            continue
        if not _normalize_layer_signs(word):
            verdict = _constant_terminal(word)
            if verdict is not None:
                return SimplifyResult(verdict, trace=tuple(trace), detail="constant period terminal")
            return SimplifyResult(
                "budget-exceeded", word.prefix, word.to_form(), tuple(trace), "sign-indefinite layers"
            )
        if word.neg_count() == 0:
            return SimplifyResult("simple", word.prefix, word.to_form(), tuple(trace))
        if word.beta == 1:
            ok = _shift_until(word, lambda: (word.layers[0][0] - Poly.const(2)).positive_from(1) == 1)
            if not ok:
                verdict = _constant_terminal(word)
                if verdict is not None:
                    return SimplifyResult(verdict, trace=tuple(trace), detail="period-1 terminal")
                return SimplifyResult(
                    "budget-exceeded", word.prefix, word.to_form(), tuple(trace), "period-1 layer too small"
                )
            word.expand_negative_singleton()
            record()
            continue
        site = _pick_identity1_site(word)
        if site is None:
            # the only (+,-) adjacency wraps around: rotate to expose it
            word.rotate()
            record()
            continue
        word.identity1(site)
        record()

    return SimplifyResult("budget-exceeded", word.prefix, word.to_form(), tuple(trace), "rewrite budget exhausted")


def _pick_identity1_site(word: _Word) -> int | None:
    """Leftmost j >= 2 with sign(j) = -1 and a +1 left neighbour; in the
    all-negative case the pair (1, 2) is used directly."""
    for j in range(2, word.beta + 1):
        if word.layers[j - 1][1] == -1 and word.layers[j - 2][1] == 1:
            return j
    if all(b == -1 for _, b in word.layers) and word.beta >= 2:
        return 2
    return None


def _eliminate_zero(word: _Word, zero_at: int) -> None:
    """Zero-elimination step: rotate the zero layer into the interior, merge
    its neighbours, then restore positivity of the merged layer."""
    while not 2 <= zero_at <= word.beta - 1:
        word.rotate()
        zero_at = next(i + 1 for i, (a, _) in enumerate(word.layers) if a.is_zero())
    word.identity2(zero_at)
    merged_at = zero_at - 1
    a, _ = word.layers[merged_at - 1]
    if a.is_zero() or a.positive_from(1) == 1:
        return
    if (-a).positive_from(1) == 1:
        word.flip_sign(merged_at)
        return
    # mixed sign over n: push periods into the prefix until sign-definite
    _shift_until(word, lambda: _sign_definite(word.layers[merged_at - 1][0]))
    a, _ = word.layers[merged_at - 1]
    if (-a).positive_from(1) == 1:
        word.flip_sign(merged_at)


def _sign_definite(p: Poly) -> bool:
    return p.is_zero() or p.positive_from(1) == 1 or (-p).positive_from(1) == 1


def _normalize_layer_signs(word: _Word) -> bool:
    """Flip eventually-negative layers and shift out mixed-sign prefixes so
    every nonzero layer is strictly positive on n >= 1.  False when stuck."""
    for _ in range(8):
        for k, (a, _) in enumerate(word.layers, start=1):
            if not a.is_zero() and (-a).positive_from(1) == 1:
                word.flip_sign(k)
        if _shift_until(
            word,
            lambda: all(a.is_zero() or a.positive_from(1) == 1 for a, _ in word.layers),
            limit=16,
        ):
            return True
    return all(a.is_zero() or a.positive_from(1) == 1 for a, _ in word.layers)


def _shift_until(word: _Word, predicate, limit: int = 64) -> bool:
    for _ in range(limit):
        if predicate():
            return True
        word.advance_period()
    return predicate()


def _constant_terminal(word: _Word) -> str | None:
    """Trichotomy verdict for an all-constant word that resists rewriting."""
    if not all(a.is_constant() for a, _ in word.layers):
        return None
    M = PolyMatrix.identity()
    for a, b in word.layers:
        M = M @ PolyMatrix.layer(a, Poly.const(b))
    verdict = _classify_constant(M)
    if verdict == DIVERGENT:
        return "divergent"
    if verdict == UNKNOWN:
        return "rational"
    return None

"""Interlaced continued-fraction closed forms.

A closed form describes a CF whose layer stream past an optional head is
periodic with period beta: layer (n-1)*beta + i has partial denominator
A_i(n) and partial numerator B_i(n), polynomials evaluated at n = 1, 2, ...
For the signed subclass the B_i are the constants +1/-1 and the A_i are
positive past the head.

The head holds whatever precedes the pattern.  When present, head[0] is
(a0, 1) — the leading integer with a placeholder numerator — and any further
entries are off-pattern layers (a_j, b_j).  A form with an empty head has
a0 = 0 and starts on the pattern immediately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cf import GeneralizedCF, MobiusMap, PolyMatrix
from .intpoly import Poly


class SICFError(ValueError):
    pass


@dataclass(frozen=True)
class SignPattern:
    """Periodic +-1 partial-numerator pattern; b_j = signs[(j-1) mod period]."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.signs:
            raise SICFError("empty sign pattern")
        if any(s not in (-1, 1) for s in self.signs):
            raise SICFError("sign patterns contain only +1 and -1")

    @property
    def period(self) -> int:
        return len(self.signs)

    def sign_at(self, j: int) -> int:
        if j < 1:
            raise SICFError("layer indices start at 1")
        return self.signs[(j - 1) % self.period]

    def reduced(self) -> "SignPattern":
        """Shortest pattern with the same infinite expansion."""
        n = self.period
        for d in range(1, n + 1):
            if n % d == 0 and all(self.signs[i] == self.signs[i % d] for i in range(n)):
                return SignPattern(self.signs[:d])
        return self

    def __str__(self) -> str:
        return "[" + ",".join(f"{s:+d}" for s in self.signs) + "]"


@dataclass(frozen=True)
class InterlacedClosedForm:
    beta: int
    A: tuple[Poly, ...]
    B: tuple[Poly, ...]
    head: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.beta < 1 or len(self.A) != self.beta or len(self.B) != self.beta:
            raise SICFError("need exactly beta A- and B-polynomials")
        if any(b.is_zero() for b in self.B):
            raise SICFError("partial-numerator polynomials must be nonzero")

    # -- stream access ---------------------------------------------------------

    @property
    def a0(self) -> int:
        return self.head[0][0] if self.head else 0

    @property
    def head_layers(self) -> tuple[tuple[int, int], ...]:
        return self.head[1:] if self.head else ()

    def term_at(self, j: int) -> tuple[int, int]:
        """(a_j, b_j) of the layer stream, head layers first."""
        if j < 1:
            raise SICFError("layer indices start at 1")
        pre = self.head_layers
        if j <= len(pre):
            return pre[j - 1]
        m = j - len(pre) - 1  # 0-based pattern position
        n, i = divmod(m, self.beta)
        return (int(self.A[i](n + 1)), int(self.B[i](n + 1)))

    def pattern_layers(self) -> Iterator[tuple[int, int]]:
        n = 1
        while True:
            for i in range(self.beta):
                yield (int(self.A[i](n)), int(self.B[i](n)))
            n += 1

    def is_signed(self) -> bool:
        """All partial numerators constant +-1."""
        return all(b.is_constant() and b.constant_value() in (-1, 1) for b in self.B)

    def is_simple(self) -> bool:
        return all(b == Poly.const(1) for b in self.B)

    def sign_counts(self) -> int:
        """Number of -1 numerators per period (signed forms only)."""
        return sum(1 for b in self.B if b.constant_value() == -1)

    def with_head(self, head: Sequence[tuple[int, int]]) -> "InterlacedClosedForm":
        return InterlacedClosedForm(self.beta, self.A, self.B, tuple(head))

    def headless(self) -> "InterlacedClosedForm":
        return InterlacedClosedForm(self.beta, self.A, self.B)

    def __str__(self) -> str:
        body = ", ".join(f"({a}; {b})" for a, b in zip(self.A, self.B))
        head = f" head={list(self.head)}" if self.head else ""
        return f"<beta={self.beta} [{body}]{head}>"


def signed_form(
    a_polys: Sequence[Poly | int],
    signs: Sequence[int],
    head: Sequence[tuple[int, int]] = (),
) -> InterlacedClosedForm:
    """Convenience constructor for signed forms from A-polys and +-1 signs."""
    A = tuple(p if isinstance(p, Poly) else Poly.const(p) for p in a_polys)
    B = tuple(Poly.const(s) for s in signs)
    return InterlacedClosedForm(len(A), A, B, tuple(head))


def to_general_cf(form: InterlacedClosedForm) -> GeneralizedCF:
    """Materialize the closed form as a term generator (head emitted first)."""

    def factory() -> Iterator[tuple[int, int]]:
        yield from form.head_layers
        yield from form.pattern_layers()

    return GeneralizedCF(form.a0, factory, f"closed form {form}")


def collapse(form: InterlacedClosedForm) -> PolyMatrix:
    """Symbolic product of the beta layer matrices of one period.

    The head is not part of the product; collapse describes the periodic part.
    """
    out = PolyMatrix.identity()
    for a, b in zip(form.A, form.B):
        out = out @ PolyMatrix.layer(a, b)
    return out


def collapsed_determinant(form: InterlacedClosedForm) -> Poly:
    """(-1)**beta * prod B_i(n), cross-checked against det(collapse(form))."""
    prod = Poly.const(1)
    for b in form.B:
        prod = prod * b
    if form.beta % 2 == 1:
        prod = -prod
    check = collapse(form).det()
    if prod != check:
        raise SICFError(f"determinant law violated: {prod} vs {check}")
    return prod


def shift_period(form: InterlacedClosedForm, k: int) -> tuple[MobiusMap, InterlacedClosedForm]:
    """Rotate the period by k layers; original value = mobius(shifted value).

    The head (and a0) are absorbed into the returned map, so the rotated form
    is headless.
    """
    if not 0 <= k < form.beta:
        raise SICFError("shift offset must satisfy 0 <= k < beta")
    mob = MobiusMap.shift_by(form.a0)
    for a, b in form.head_layers:
        mob = mob @ MobiusMap.layer(a, b)
    for i in range(k):
        mob = mob @ MobiusMap.layer(int(form.A[i](1)), int(form.B[i](1)))
    A = tuple(form.A[k:]) + tuple(p.shift(1) for p in form.A[:k])
    B = tuple(form.B[k:]) + tuple(p.shift(1) for p in form.B[:k])
    return mob, InterlacedClosedForm(form.beta, A, B)


# ---------------------------------------------------------------------------
# canonical JSON interchange
# ---------------------------------------------------------------------------


def form_to_json(form: InterlacedClosedForm) -> dict:
    return {
        "beta": form.beta,
        "A": [list(p.coeffs) for p in form.A],
        "B": [list(p.coeffs) for p in form.B],
        "head": [list(pair) for pair in form.head],
    }


def form_from_json(data: dict | str) -> InterlacedClosedForm:
    if isinstance(data, str):
        data = json.loads(data)
    A = tuple(Poly(tuple(c)) for c in data["A"])
    B = tuple(Poly(tuple(c)) for c in data["B"])
    head = tuple((int(a), int(b)) for a, b in data.get("head", []))
    return InterlacedClosedForm(int(data["beta"]), A, B, head)


def mobius_to_json(m: MobiusMap) -> dict:
    return {"a": m.a, "b": m.b, "c": m.c, "d": m.d}


def mobius_from_json(data: dict | str) -> MobiusMap:
    if isinstance(data, str):
        data = json.loads(data)
    return MobiusMap(int(data["a"]), int(data["b"]), int(data["c"]), int(data["d"]))

"""Curated regression fixtures: known and conjectured interlaced CF
expansions of the catalog constants, with their reference digits-per-term
rates, used by the fixtures report and the regression tests.

Each row binds a rational function of a catalog constant to a closed form;
building a row re-derives the target value, so a row that stopped matching
its constant would fail loudly rather than produce a bogus rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cf import GeneralizedCF
from .constants import ConstantSpec, evaluate_constant
from .extraction import euclidean_cf
from .intpoly import Poly
from .sicf import InterlacedClosedForm, signed_form, to_general_cf


@dataclass(frozen=True)
class ReferenceRow:
    name: str
    formula: str
    constant: str  # catalog label
    f: tuple[int, ...]  # rational map applied to the constant, ascending coeffs
    g: tuple[int, ...]
    form: InterlacedClosedForm | None  # None: use the simple CF of the value
    reference_rate: float

    def target(self, digits: int) -> Fraction:
        base = evaluate_constant(ConstantSpec.catalog(self.constant), digits).as_fraction()
        num = sum(c * base**i for i, c in enumerate(self.f))
        den = sum(c * base**i for i, c in enumerate(self.g))
        return num / den

    def cf(self, digits: int = 1400) -> GeneralizedCF:
        if self.form is not None:
            return to_general_cf(self.form)
        terms = euclidean_cf_of(self.target(digits))
        return GeneralizedCF.simple(terms, f"simple CF of {self.formula}")


def euclidean_cf_of(value: Fraction, terms: int = 160) -> list[int]:
    out = []
    c = value
    for _ in range(terms):
        a = c.numerator // c.denominator
        out.append(a)
        c -= a
        if c == 0:
            break
        c = 1 / c
    return out


def _n(*coeffs: int) -> Poly:
    return Poly(coeffs)


def reference_rows() -> list[ReferenceRow]:
    rows = [
        ReferenceRow(
            "e-minus-one", "-1+e", "e", (-1, 1), (1,),
            signed_form([_n(1), _n(0, 2), _n(1)], [1, 1, 1], head=[(1, 1)]),
            1.2868,
        ),
        ReferenceRow(
            "e-ratio", "(1+e)/(-1+e)", "e", (1, 1), (-1, 1),
            signed_form([_n(2, 4)], [1], head=[(2, 1)]),
            4.8512,
        ),
        ReferenceRow(
            "e2-half", "-1/2+e2/2", "e2", (-1, 1), (2,),
            signed_form([_n(3, 2)], [1], head=[(3, 1)]),
            4.2727,
        ),
        ReferenceRow(
            "tan1", "tan(1)", "tan_1", (0, 1), (1,),
            signed_form([_n(-1, 2), _n(1)], [1, 1], head=[(1, 1)]),
            1.8441,
        ),
        ReferenceRow(
            "tan1-ratio", "tan(1)/(-1+tan(1))", "tan_1", (0, 1), (-1, 1),
            signed_form([_n(3, 2)], [-1], head=[(3, 1)]),
            4.2727,
        ),
        ReferenceRow(
            "j0-over-j1", "J0(1)/J1(1)", "J0/J1", (0, 1), (1,),
            signed_form([_n(2, 2)], [-1], head=[(2, 1)]),
            4.2669,
        ),
        ReferenceRow(
            "j1-over-j2", "J1(1)/J2(1)", "J1/J2", (0, 1), (1,),
            signed_form([_n(4, 2)], [-1], head=[(4, 1)]),
            4.2784,
        ),
        ReferenceRow(
            "j53-fast", "2/(J5(1)/J3(1)+1)", "J5/J3", (2,), (1, 1),
            signed_form([_n(24, 16), _n(2, 1)], [-1, -1], head=[(2, 1)]),
            4.3008,
        ),
        ReferenceRow(
            "j13-fast", "J1(1)/J3(1)", "J1/J3", (0, 1), (1,),
            signed_form([_n(0, 1), _n(1), _n(23, 16)], [-1, 1, 1], head=[(23, 1)]),
            2.6693,
        ),
        ReferenceRow(
            "phi-simple", "phi", "phi", (0, 1), (1,),
            signed_form([_n(1)], [1], head=[(1, 1)]),
            0.4096,
        ),
        ReferenceRow(
            "phi-fast", "(1+2*phi)/(-3+2*phi)", "phi", (1, 2), (-3, 2),
            signed_form([_n(18)], [-1], head=[(18, 1)]),
            2.4576,
        ),
        ReferenceRow(
            "tanh-quarter-fast", "2/tanh(1/4)", "tanh_quarter", (2,), (0, 1),
            signed_form([_n(-2, 8), _n(8, 32)], [1, 1], head=[(8, 1)]),
            4.9003,
        ),
        ReferenceRow(
            "sqrt-e-row", "(3+3*sqrt(e))/2", "sqrt_e", (3, 3), (2,),
            signed_form(
                [_n(-6, 8), _n(1), _n(-36, 72), _n(1), _n(-2, 8), _n(3)],
                [1, -1, 1, -1, 1, -1],
                head=[(3, 1)],
            ),
            2.4322,
        ),
        ReferenceRow(
            "e-period6", "(2+2e)/(-1+3e)", "e", (2, 2), (-1, 3),
            signed_form(
                [_n(-3, 4), _n(-40, 64), _n(-1, 4), _n(2), _n(-3, 16), _n(2)],
                [-1, 1, 1, -1, 1, 1],
                head=[(2, 1)],
            ),
            3.4269,
        ),
        ReferenceRow(
            "e-period4", "(-5+3e)/(3-e)", "e", (-5, 3), (3, -1),
            signed_form(
                [_n(1), _n(1, 4), _n(1), _n(12, 16)],
                [-1, 1, -1, 1],
                head=[(12, 1)],
            ),
            2.1508,
        ),
        # simple-CF comparison rows: terms derived by plain extraction
        ReferenceRow("j53-simple", "J5(1)/J3(1) (simple CF)", "J5/J3", (0, 1), (1,), None, 1.9046),
        ReferenceRow("j13-simple", "J1(1)/J3(1) (simple CF)", "J1/J3", (0, 1), (1,), None, 1.8643),
        ReferenceRow("e2-simple", "e2 (simple CF)", "e2", (0, 1), (1,), None, 2.2806),
    ]
    return rows


# Faster-vs-slower pairs whose rate ordering must hold strictly.
ORDERING_PAIRS = [
    ("phi-simple", "phi-fast"),
    ("j53-simple", "j53-fast"),
    ("j13-simple", "j13-fast"),
]

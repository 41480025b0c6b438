"""Continued-fraction conjecture toolkit.

Library layers:

- constants: certified decimal evaluation of the target-constant catalog
- cf: exact convergents, Mobius maps, convergence-rate measurement
- sicf: interlaced closed forms, period collapse, shifts, JSON interchange
- extraction: signed CF extraction with interval-certified digits
- recurrence: Berlekamp-Massey synthesis, integer lift, interlace fitting
- transform: folding, degree prediction, classification, sign elimination
- search: the end-to-end conjecture search and verification pipeline
- cli: the ``cfconj`` command-line frontend
"""

__version__ = "0.1.0"

from .cf import (
    INFINITY,
    Convergent,
    GeneralizedCF,
    MobiusMap,
    PolyMatrix,
    convergents,
    digits_per_term,
    equivalence_transform,
    evaluate_cf,
    mobius_apply,
)
from .constants import (
    ConstantSpec,
    DecimalConstant,
    eval_bessel_first_kind,
    evaluate_constant,
    list_catalog,
)
from .extraction import SequenceSample, extract_signed_cf
from .intpoly import Poly
from .recurrence import (
    LinearRecurrence,
    berlekamp_massey,
    extend_sequence,
    find_recurrence,
    interlace_decompose,
    is_significant,
)
from .search import (
    Conjecture,
    RationalFunction,
    SearchSpace,
    enumerate_rational_functions,
    enumerate_sign_patterns,
    run_search,
    verify_conjecture,
)
from .sicf import (
    InterlacedClosedForm,
    SignPattern,
    collapse,
    collapsed_determinant,
    form_from_json,
    form_to_json,
    shift_period,
    signed_form,
    to_general_cf,
)
from .transform import (
    DegreePrediction,
    FoldResult,
    SimplifyResult,
    TietzeResult,
    apply_identity1,
    apply_identity2,
    classify_convergence,
    fold,
    predict_degrees,
    sicf_to_simple,
    tietze_irrationality,
)

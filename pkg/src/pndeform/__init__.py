"""Exact arithmetic for 2-dimensional mod p^n deformation computations."""

__version__ = "0.1.0"

from .ring import GaloisRing, RingElem, invert, reduce_precision, sqrt_unit, teichmuller
from .mat import HPoly, Mat2, h_poly, mat_pow_via_trace, ordinary_form
from .grp import (
    FiniteMatrixGroup,
    TrackedElement,
    check_r2_element,
    closure,
    contains_sl2,
    find_r1_element,
    find_sl2f3_section,
)
from .coh import (
    AdjointModule,
    CocycleSpace,
    h0,
    h0_group,
    h1_enumerated,
    h1_tame,
    inflation_restriction_check,
    quotient_invariants,
)
from .localdef import (
    ConditionTag,
    LocalCondition,
    TameCase,
    VersalPresentation,
    check_substantial,
    classify_tame_case,
    enumerate_lifts,
    tangent_dims,
    verify_presentation,
)
from .hyp import HypothesisReport, Scenario, Verdict, run_checks
from .ledger import (
    LedgerRow,
    WilesLedger,
    delta_invariance_check,
    dual_selmer_schedule,
    theorem_a_ledger,
    wiles_delta,
)

__all__ = [
    "GaloisRing", "RingElem", "teichmuller", "sqrt_unit", "reduce_precision",
    "invert", "Mat2", "HPoly", "h_poly", "mat_pow_via_trace", "ordinary_form",
    "FiniteMatrixGroup", "closure", "contains_sl2", "TrackedElement",
    "find_r1_element", "check_r2_element", "find_sl2f3_section",
    "AdjointModule", "CocycleSpace", "h0", "h0_group", "h1_enumerated",
    "h1_tame", "quotient_invariants", "inflation_restriction_check",
    "ConditionTag", "LocalCondition", "TameCase", "VersalPresentation",
    "classify_tame_case", "enumerate_lifts", "verify_presentation",
    "tangent_dims", "check_substantial", "Scenario", "Verdict",
    "HypothesisReport", "run_checks", "LedgerRow", "WilesLedger",
    "wiles_delta", "delta_invariance_check", "dual_selmer_schedule",
    "theorem_a_ledger",
]

from .ring import (
    GradedRing,
    GradedRingPresentation,
    Involution,
    PresentationError,
    RingElement,
    RingError,
    RingMap,
    RingSyntaxError,
    build_ring,
    normal_form,
    parse_poly,
    swap_involution,
)
from .presets import (
    RING_PRESETS,
    flag_ring,
    pair_ring,
    pair_to_flag_pullback,
    projective_ring,
    ring_from_json,
    ring_preset,
)
from .chern import (
    BundleExpr,
    InverseFromExactSequence,
    Known,
    Line,
    Pullback,
    QuotientClass,
    RankError,
    TensorWithLine,
    TotalClass,
    Trivial,
    WhitneySum,
    chern_theta,
    chern_total,
    bundle_from_json,
    chern_xi_eta,
    eval_bundle_json,
)
from .gysin import CircleBundleCohomology, MultRank, circle_bundle_cohomology, mult_ranks, poincare_twisted

__all__ = [name for name in dir() if not name.startswith("_")]

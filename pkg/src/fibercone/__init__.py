"""Intersection theory on point-blowup chains, round-ups of the F(l) family,
divisorial value sequences and Gauss valuations, all in exact arithmetic."""

from .blowup_chain import (
    FREE,
    BlowupChain,
    ChainError,
    IntersectionForm,
    PullbackMap,
    build_chain,
    chain_from_json,
    intersection_form,
    paper_chain,
    pullback,
)
from .filtration_values import (
    Attained,
    CertificateReport,
    GammaReport,
    HasCenter,
    LexPair,
    NotAttainedUpTo,
    SubadditivityError,
    UnknownUpTo,
    ValueSequence,
    center_criterion,
    coefficient_cross_check,
    composite_value_sequence,
    distinct_components_certificate,
    gamma,
    paper_value_sequence,
    verify_certificate,
)
from .gauss_valuation import (
    GaussPolynomial,
    ValuedScalar,
    associated_graded_dimensions,
    extended_ideal_value,
    gauss_multiplicativity_check,
    gauss_value,
)
from .qdivisor import (
    IntegralDivisor,
    QDivisor,
    ceil_multiple,
    classify_case,
    closed_form_intersection,
    intersect,
    intersect_divisors,
    is_antinef,
    paper_D,
    paper_F,
)

__version__ = "0.1.0"

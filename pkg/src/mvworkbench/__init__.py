"""Exact workbench for piecewise linear logic over the rational unit cube."""

from mvworkbench.closedsets import (
    ClosedSetDesc,
    LinearRecurrenceSchema,
    ProbeSequence,
    RationalFunctionSchema,
    Trivalent,
    zero_locus_of_basis,
)
from mvworkbench.decide import (
    CoverCertificate1D,
    IdealMembershipResult,
    NotSssWitness,
    SssVerdict,
    cover_certificate_1d,
    decide_sss,
    ideal_membership,
    not_sss_witness,
    verify_fact_chain,
)
from mvworkbench.formulas import parse as parse_formula
from mvworkbench.kernels import IMPL as KERNEL_IMPL
from mvworkbench.mcnaughton import (
    PLFunction,
    compile_formula,
    constant_function,
    coordinate_function,
    directional_derivative,
    mv_implies,
    mv_max,
    mv_min,
    mv_neg,
    mv_oplus,
    mv_otimes,
    pl_equal,
    pl_leq,
    point_zero_function,
    segment_zero_function,
    truncated_multiple,
    zeroset,
)
from mvworkbench.polytopes import Polytope, unit_cube
from mvworkbench.tangents import (
    Cone,
    count_in_cone,
    is_outgoing,
    limit_direction,
    tangent_report,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedSetDesc",
    "Cone",
    "CoverCertificate1D",
    "IdealMembershipResult",
    "KERNEL_IMPL",
    "LinearRecurrenceSchema",
    "NotSssWitness",
    "PLFunction",
    "Polytope",
    "ProbeSequence",
    "RationalFunctionSchema",
    "SssVerdict",
    "Trivalent",
    "__version__",
    "compile_formula",
    "constant_function",
    "coordinate_function",
    "count_in_cone",
    "cover_certificate_1d",
    "decide_sss",
    "directional_derivative",
    "ideal_membership",
    "is_outgoing",
    "limit_direction",
    "mv_implies",
    "mv_max",
    "mv_min",
    "mv_neg",
    "mv_oplus",
    "mv_otimes",
    "not_sss_witness",
    "parse_formula",
    "pl_equal",
    "pl_leq",
    "point_zero_function",
    "segment_zero_function",
    "tangent_report",
    "truncated_multiple",
    "unit_cube",
    "verify_fact_chain",
    "zero_locus_of_basis",
    "zeroset",
]

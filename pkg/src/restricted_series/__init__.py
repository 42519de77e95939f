"""Constructive approximation certificates for power series with coefficients
restricted to a finite set."""

from .core import (
    AffineTransform,
    Angle,
    Certificate,
    CoefficientSet,
    SparseAssignment,
    eval_prefix,
    normalize_affine,
    tail_bound,
    transport_target,
)
from .engines import (
    EngineParams,
    PrefixConstraint,
    approx_theorem1,
    approx_theorem2,
    approx_theorem3,
    approximate,
    select_tau,
    verify_certificate,
)
from .errors import (
    BudgetExceeded,
    HorizonExhausted,
    HypothesisFailure,
    InvalidZeta,
    NotApplicable,
    NotSpanning,
    RegionTooThin,
    RestrictedSeriesError,
    VerificationFailed,
)
from .region import Disk, RegionSpec, Wedge

__version__ = "0.1.0"

__all__ = [
    "AffineTransform",
    "Angle",
    "Certificate",
    "CoefficientSet",
    "SparseAssignment",
    "eval_prefix",
    "normalize_affine",
    "tail_bound",
    "transport_target",
    "EngineParams",
    "PrefixConstraint",
    "approx_theorem1",
    "approx_theorem2",
    "approx_theorem3",
    "approximate",
    "select_tau",
    "verify_certificate",
    "BudgetExceeded",
    "HorizonExhausted",
    "HypothesisFailure",
    "InvalidZeta",
    "NotApplicable",
    "NotSpanning",
    "RegionTooThin",
    "RestrictedSeriesError",
    "VerificationFailed",
    "Disk",
    "RegionSpec",
    "Wedge",
]

"""bowlab: numerical laboratory for bowl-type translating solitons of
fully nonlinear curvature flows."""

__version__ = "0.1.0"

from .curvature import (  # noqa: F401
    AxiomReport,
    ConeSampler,
    GardingCone,
    HalfSumCone,
    IntersectionCone,
    PositiveCone,
    SymmetricCurvature,
    gamma_from_dict,
    gamma_from_json,
    gamma_to_dict,
    gamma_to_json,
    h_times_sn,
    harmonic_sum_inverse,
    hessian_quotient,
    mean,
    product,
    rescale,
    sigma_root,
    verify_axioms,
)
from .errors import (  # noqa: F401
    BowlabError,
    ConeViolation,
    ConfigError,
    NoBracket,
    NoOverlap,
    NoRoot,
    NotExtendable,
    PreconditionViolation,
    StepFailure,
    ValidationError,
)

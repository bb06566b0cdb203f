"""Symbolic calculus of variations: Noether currents, Noether identities,
triviality of conservation laws and discrete first integrals."""

from .errors import (
    DomainError,
    NotAConservationLawError,
    NotASymmetryError,
    OrderOverflowError,
    ParseError,
    ReductionError,
    UndeclaredSymbolError,
    VarCalcError,
)
from .expr import Expr, JetSpace, LatticeSpace, Symbol, canonicalize, eval_at, parse, substitute
from .jet import (
    Current,
    GeneralizedField,
    SymmetryCandidate,
    divergence,
    evolutionary_representative,
    prolong_apply,
    total_derivative,
)
from .variational import (
    EulerLagrange,
    LinearDiffOp,
    boundary_current,
    euler_lagrange,
    formal_adjoint,
    is_self_adjoint,
    linearize,
)
from .noether import (
    GaugeFamily,
    NoetherIdentity,
    NormalForm,
    Triviality,
    TrivialityVerdict,
    check_divergence_symmetry,
    classify_triviality,
    gauge_specialization,
    magri_check,
    noether_current,
    noether_identity,
)
from .discrete import (
    DiscreteLagrangian,
    DiscreteSymmetry,
    discrete_euler_lagrange,
    discrete_first_integral,
    shift,
)
from .verify import certify_zero, random_point

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NotAConservationLawError",
    "NotASymmetryError",
    "OrderOverflowError",
    "ParseError",
    "ReductionError",
    "UndeclaredSymbolError",
    "VarCalcError",
    "Current",
    "GeneralizedField",
    "SymmetryCandidate",
    "divergence",
    "evolutionary_representative",
    "prolong_apply",
    "total_derivative",
    "EulerLagrange",
    "LinearDiffOp",
    "boundary_current",
    "euler_lagrange",
    "formal_adjoint",
    "is_self_adjoint",
    "linearize",
    "GaugeFamily",
    "NoetherIdentity",
    "NormalForm",
    "Triviality",
    "TrivialityVerdict",
    "check_divergence_symmetry",
    "classify_triviality",
    "gauge_specialization",
    "magri_check",
    "noether_current",
    "noether_identity",
    "DiscreteLagrangian",
    "DiscreteSymmetry",
    "discrete_euler_lagrange",
    "discrete_first_integral",
    "shift",
    "Expr",
    "JetSpace",
    "LatticeSpace",
    "Symbol",
    "canonicalize",
    "eval_at",
    "parse",
    "substitute",
    "certify_zero",
    "random_point",
]

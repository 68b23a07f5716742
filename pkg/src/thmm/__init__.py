"""Truncated Hausdorff matrix moment problem toolkit.

Given Hermitian q x q moments s_0..s_m on [a, b], the package classifies
Hausdorff positive definiteness of the block Hankel families, builds the
orthogonal matrix polynomial families with their second-kind companions,
computes both Dyukarev-Stieltjes parameter chains by independent routes,
factorizes the resolvent matrix multiplicatively, and evaluates the
Krein and Friedrichs extremal solutions both as polynomial quotients and
as finite matrix continued fractions.  Every central quantity has at
least two computation routes, and the routes are cross-checked.
"""

from .errors import (
    EmptyMeasure,
    InconsistentLengths,
    InsufficientMoments,
    InvalidMomentSequence,
    NonPositiveParameter,
    OrderUnavailable,
    PointOnInterval,
    PointOutsideInterval,
    PoleAtZ,
    RouteMismatch,
    SingularDenominator,
    SingularLevel,
    SingularNormalization,
    SingularPivot,
    ThmmError,
    WrongMatrixSize,
)
from .moments import (
    Classification,
    DiscreteMeasure,
    HankelSet,
    MomentSequence,
    SchurChain,
    StructuralVectors,
    Witness,
    build_hankels,
    classify,
    moments_from_discrete_measure,
    schur_chain,
)
from .polynomials import (
    MatrixPoly,
    PolynomialFamily,
    adjoint_eval,
    build_family,
    ensure_family,
    eval_poly,
    verify_family_identities,
)
from .dsm import (
    DsmFirst,
    DsmSecond,
    compute_first,
    compute_second,
    product_identities,
    recover_moments,
    scalar_determinant_params,
    stieltjes_limit_check,
)
from .resolvent import (
    AuxMatrixValue,
    AuxTriple,
    FactorChain,
    ResolventValue,
    aux_hat_even,
    aux_matrices,
    aux_product,
    aux_tilde_even,
    aux_tilde_odd,
    bp_factor,
    bp_pair_check,
    bp_split,
    factor_chain,
    resolvent_direct,
    resolvent_factorized,
    resolvent_from_aux,
)
from .extremal import (
    ContinuedFractionChain,
    ExtremalSet,
    evaluate_chain,
    extremal_cf,
    extremal_chain,
    extremal_quotient,
    mobius_apply,
    mobius_chain_apply,
    solution_transform,
)
from .reporting import IdentityCheck, IdentityReport

__version__ = "0.1.0"

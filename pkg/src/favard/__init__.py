"""Orthogonal polynomials, CAP operators and Jacobi sequences of measures on R^d."""

from .arith import F64, RATIONAL, format_scalar, get_arith, make_arith, parse_scalar, set_arith
from .cap import CapLevel, build_cap, check_creator_injectivity, check_quantum_decomposition
from .errors import CheckReport, ConfigError, FavardError, InvariantError, MomentError, SingularMatrixError
from .favard1d import Recurrence1D, product_jacobi_closed_form, stieltjes
from .fock import (
    FockFields,
    JacobiSequences,
    build_fock_fields,
    build_jacobi,
    check_basis_covariance,
    jacobi_in_basis,
    jacobi_pipeline,
    pullback_moments,
    reconstruct_moments,
)
from .moments import (
    Atomic,
    Exponential,
    Gaussian,
    MomentFunctional,
    MomentList,
    MomentTable,
    Product,
    TwoPoint,
    Uniform,
    build_moments,
    factor_moments,
    inner,
)
from .ortho import OrthogonalDecomposition, decompose, project_coeffs
from .polyalg import (
    Polynomial,
    SymBasis,
    canonical_sym_gram,
    enumerate_monomials,
    shift_matrix,
    sym_dim,
    sym_lift,
)
from .verify import CHECKS, analyze, run_checks

__version__ = "0.1.0"

"""Contour-integral eigensolvers for the generalized problem A x = lambda B x:
all eigenpairs inside a circle in the complex plane, by spectral projection
through quadrature on the resolvent and projected-pencil extraction (QZ-based
oblique projection, or orthogonal projection in the CIRR variant). The dense
kernels (LU, QR, rank-revealing QR, Jacobi SVD, QZ) live in this package."""

from .contour import Circle, QuadratureRule, is_inside, nodes_weights
from .dense_core import (
    LuFactorization,
    SingularMatrixError,
    Svd,
    cpqr_rank,
    lu_factor,
    lu_solve,
    qr_orth,
    svd_jacobi,
)
from .mm_io import (
    MatrixMarketError,
    SparseTriplets,
    load_matrix_market,
    parse_matrix_market,
    to_dense,
)
from .moments import (
    MomentStack,
    ShiftedSolveCache,
    SingularNodeError,
    build_cache,
    compute_moments,
    estimate_count,
)
from .oracle import (
    SyntheticSpec,
    charpoly_root,
    charpoly_spotcheck,
    dense_spectrum,
    generate,
)
from .qz_kernel import (
    GeneralizedEigenvalue,
    GeneralizedSchur,
    QzConvergenceError,
    eig_triangular_pair,
    generalized_schur,
    hessenberg_triangular,
    qz_iterate,
)
from .solvers import (
    EigenReport,
    SolverConfig,
    ciqz_extract,
    cirr_extract,
    filter_candidates,
    residual,
    select_block_size,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "QuadratureRule",
    "is_inside",
    "nodes_weights",
    "LuFactorization",
    "SingularMatrixError",
    "Svd",
    "cpqr_rank",
    "lu_factor",
    "lu_solve",
    "qr_orth",
    "svd_jacobi",
    "MatrixMarketError",
    "SparseTriplets",
    "load_matrix_market",
    "parse_matrix_market",
    "to_dense",
    "MomentStack",
    "ShiftedSolveCache",
    "SingularNodeError",
    "build_cache",
    "compute_moments",
    "estimate_count",
    "SyntheticSpec",
    "charpoly_root",
    "charpoly_spotcheck",
    "dense_spectrum",
    "generate",
    "GeneralizedEigenvalue",
    "GeneralizedSchur",
    "QzConvergenceError",
    "eig_triangular_pair",
    "generalized_schur",
    "hessenberg_triangular",
    "qz_iterate",
    "EigenReport",
    "SolverConfig",
    "ciqz_extract",
    "cirr_extract",
    "filter_candidates",
    "residual",
    "select_block_size",
    "solve",
]

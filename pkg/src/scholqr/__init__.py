"""Shifted Cholesky QR orthogonalization for tall-skinny matrices.

Factor X = QR through repeated Gram/Cholesky/solve passes, choosing the
diagonal shift from a column-sparsity profile so that ill-conditioned
matrices with a few dense columns get a much smaller (hence more accurate)
shift than the column-norm fallback. Ships bound evaluators for the
a-priori accuracy guarantees, matrix generators, a scikit-learn style
transformer, and a benchmark CLI.
"""
from .algos import (QrOutcome, StageRecord, cholesky_qr, cholesky_qr2,
                    shifted_cholesky_qr, shifted_cholesky_qr3, sparse_scholqr,
                    sparse_scholqr3)
from .bounds import (BoundReport, BranchMismatch, ErrorMetrics, FailedOutcome,
                     evaluate_bounds, metrics, orthogonality_bound)
from .estimator import CholeskyOrthogonalizer
from .gen import (Family, GenSpec, ParseError, UnsupportedField,
                  gen_arrowhead_t1, gen_block_t2, gen_dense_svd, generate,
                  read_matrix_market, write_matrix_market)
from .matcore import (UNIT_ROUNDOFF, Breakdown, SingularFactor,
                      SpectralSummary, cholesky, column_norms_sq, gnorm,
                      gnorm_of_product_bounds_hold, gram, spectral,
                      tri_solve_rows)
from .shift import (Branch, EncReport, ShiftPlan, check_enc, kappa_sufficient,
                    plan_shift)
from .sparsity import (AllZeroMatrix, Kind, SparsityProfile, profile,
                       validate_settings)

__version__ = "0.1.0"

__all__ = [
    "UNIT_ROUNDOFF",
    "AllZeroMatrix",
    "BoundReport",
    "Branch",
    "BranchMismatch",
    "Breakdown",
    "CholeskyOrthogonalizer",
    "EncReport",
    "ErrorMetrics",
    "FailedOutcome",
    "Family",
    "GenSpec",
    "Kind",
    "ParseError",
    "QrOutcome",
    "ShiftPlan",
    "SingularFactor",
    "SparsityProfile",
    "SpectralSummary",
    "StageRecord",
    "UnsupportedField",
    "cholesky",
    "cholesky_qr",
    "cholesky_qr2",
    "check_enc",
    "column_norms_sq",
    "evaluate_bounds",
    "gen_arrowhead_t1",
    "gen_block_t2",
    "gen_dense_svd",
    "generate",
    "gnorm",
    "gnorm_of_product_bounds_hold",
    "gram",
    "kappa_sufficient",
    "metrics",
    "orthogonality_bound",
    "plan_shift",
    "profile",
    "read_matrix_market",
    "shifted_cholesky_qr",
    "shifted_cholesky_qr3",
    "sparse_scholqr",
    "sparse_scholqr3",
    "spectral",
    "tri_solve_rows",
    "validate_settings",
    "write_matrix_market",
]

"""Dense kernels for tall-skinny orthogonalization.

Gram products, Cholesky factorization with breakdown detection, row-wise
triangular solves, and spectral/column-norm summaries. All operations are
pure functions of immutable inputs and deterministic on a fixed platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack as _lapack
from scipy.linalg import solve_triangular as _solve_triangular

#: double-precision unit roundoff used in every formula and bound
UNIT_ROUNDOFF = 2.0 ** -53


class Breakdown(Exception):
    """A Cholesky pivot was non-positive or non-finite.

    Attributes
    ----------
    pivot_index : int
        0-based index of the failing pivot.
    stage : int or None
        Pipeline stage (1-based) when raised by a multi-stage driver.
    """

    def __init__(self, pivot_index, stage=None):
        self.pivot_index = int(pivot_index)
        self.stage = stage
        where = f" at stage {stage}" if stage is not None else ""
        super().__init__(f"non-positive pivot {self.pivot_index}{where}")


class SingularFactor(ValueError):
    """Triangular factor has a zero diagonal entry."""


def as_matrix(x, name="x"):
    """Validate and return a finite 2-D float64 array, C-contiguous."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} must have finite entries")
    return a


def as_tall(x, name="x"):
    """Validate the tall-skinny contract rows >= cols."""
    a = as_matrix(x, name)
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"{name} must satisfy rows >= cols, got {a.shape}")
    return a


def as_upper_triangular(r, name="r"):
    """Validate an upper-triangular square factor."""
    a = as_matrix(r, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got {a.shape}")
    if np.any(np.tril(a, -1) != 0.0):
        raise ValueError(f"{name} must have zero strictly-lower entries")
    return a


@dataclass(frozen=True)
class SpectralSummary:
    """Singular-value and column-norm quantities of one matrix.

    ``gnorm`` is the maximum Euclidean column norm; ``gnorm_sq`` is the same
    quantity as the directly accumulated sum of squares, kept separately
    because re-squaring the rounded norm perturbs downstream shift values at
    the last ulp. ``kappa2`` is +inf when the matrix is numerically
    rank-deficient.
    """

    sigma_max: float
    sigma_min: float
    kappa2: float
    gnorm: float
    fro: float
    gnorm_sq: float


def gram(x):
    """Return G = XᵀX, exactly symmetric (upper triangle mirrored)."""
    a = as_matrix(x)
    g = a.T @ a
    return np.triu(g) + np.triu(g, 1).T


def cholesky(g):
    """Upper-triangular Cholesky factor of a symmetric matrix.

    Returns R with RᵀR = G up to rounding and strictly positive diagonal.
    Raises Breakdown with the 0-based pivot index when a pivot is
    non-positive or non-finite; no pivot perturbation or rescue is applied.
    """
    a = as_matrix(g, "g")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"g must be square, got {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("g must be symmetric")
    c, info = _lapack.dpotrf(a, lower=1)
    if info > 0:
        raise Breakdown(info - 1)
    if info < 0:
        raise ValueError(f"invalid argument {-info} to dpotrf")
    return np.ascontiguousarray(np.tril(c).T)


def tri_solve_rows(x, r):
    """Solve qᵢᵀR = xᵢᵀ for every row of X, i.e. Q = XR⁻¹.

    Implemented as one transposed triangular solve; no explicit inverse is
    formed. Raises SingularFactor when R has a zero diagonal entry.
    """
    a = as_matrix(x)
    rt = as_upper_triangular(r)
    if a.shape[1] != rt.shape[0]:
        raise ValueError(f"cols(x)={a.shape[1]} != order(r)={rt.shape[0]}")
    if np.any(np.diag(rt) == 0.0):
        raise SingularFactor("triangular factor has a zero diagonal entry")
    q = _solve_triangular(rt, a.T, trans="T", lower=False).T
    return np.ascontiguousarray(q)


def column_norms_sq(x):
    """Per-column sums of squares (pairwise accumulation, deterministic)."""
    a = as_matrix(x)
    return (a * a).sum(axis=0)


def gnorm(x):
    """Maximum Euclidean column norm of X."""
    return math.sqrt(float(column_norms_sq(x).max()))


def spectral(x):
    """SpectralSummary of a nonzero matrix.

    Singular values come from a dense decomposition of X itself (never the
    Gram matrix, whose condition number is squared). kappa2 is reported as
    +inf when sigma_min <= sigma_max * 2**-53, i.e. when the reciprocal
    condition number falls below the unit roundoff and the quotient stops
    carrying information.
    """
    a = as_matrix(x)
    sv = np.linalg.svd(a, compute_uv=False)
    sigma_max = float(sv[0])
    sigma_min = float(sv[-1])
    if sigma_max == 0.0:
        raise ValueError("spectral summary of an all-zero matrix")
    gsq = float(column_norms_sq(a).max())
    if sigma_min <= sigma_max * UNIT_ROUNDOFF:
        kappa2 = math.inf
    else:
        kappa2 = sigma_max / sigma_min
    return SpectralSummary(
        sigma_max=sigma_max,
        sigma_min=sigma_min,
        kappa2=kappa2,
        gnorm=math.sqrt(gsq),
        fro=float(np.linalg.norm(a)),
        gnorm_sq=gsq,
    )


def gnorm_of_product_bounds_hold(a, b, rel_slack=1e-12):
    """Check the column-norm functional inequalities for a pair (A, B).

    Returns three booleans:
      1. [AB]_g <= ||A||_2 [B]_g
      2. [AB]_g <= ||A||_F [B]_g
      3. [A+B]_g <= [A]_g + [B]_g  (vacuously True when shapes differ)
    each allowing the given relative slack for rounding.
    """
    am = as_matrix(a, "a")
    bm = as_matrix(b, "b")
    if am.shape[1] != bm.shape[0]:
        raise ValueError(f"shapes not conformable: {am.shape} @ {bm.shape}")
    g_ab = gnorm(am @ bm)
    g_b = gnorm(bm)
    ok_spec = g_ab <= np.linalg.norm(am, 2) * g_b * (1.0 + rel_slack)
    ok_fro = g_ab <= np.linalg.norm(am) * g_b * (1.0 + rel_slack)
    if am.shape == bm.shape:
        ok_sum = gnorm(am + bm) <= (gnorm(am) + gnorm(bm)) * (1.0 + rel_slack)
    else:
        ok_sum = True
    return bool(ok_spec), bool(ok_fro), bool(ok_sum)

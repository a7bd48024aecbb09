"""Column-sparsity profiling and T1/T2/Dense classification.

A column is "dense" when its nonzero count reaches a configurable fraction
of the row count; the profile records how many dense columns exist (v), the
worst-case nonzero counts for dense and sparse columns (t1, t2), and the
largest absolute entry (c). Matrices with no dense columns are T2, matrices
with a minority of dense columns are T1, and anything past half dense
columns is classified Dense and handled by the original shift branch.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import UNIT_ROUNDOFF, as_matrix


class AllZeroMatrix(ValueError):
    """Every entry is within zero_tol of zero; no profile exists."""


class Kind(enum.Enum):
    T1 = "T1"
    T2 = "T2"
    DENSE = "Dense"


@dataclass(frozen=True)
class SparsityProfile:
    v: int
    t1: int
    t2: int
    c: float
    kind: Kind
    nnz_per_column: tuple


def profile(x, zero_tol=0.0, dense_fraction=0.25):
    """Extract the sparsity profile (v, t1, t2, c, kind) of a matrix.

    Parameters
    ----------
    zero_tol : float
        Entries with absolute value <= zero_tol count as zeros. Default 0
        (exact zeros only).
    dense_fraction : float in (0, 1]
        A column is dense when its nonzero count >= dense_fraction * rows.
    """
    a = as_matrix(x)
    if zero_tol < 0 or not np.isfinite(zero_tol):
        raise ValueError(f"zero_tol must be finite and >= 0, got {zero_tol}")
    if not 0.0 < dense_fraction <= 1.0:
        raise ValueError(f"dense_fraction must be in (0, 1], got {dense_fraction}")
    rows, cols = a.shape
    absx = np.abs(a)
    c = float(absx.max())
    if c <= zero_tol:
        raise AllZeroMatrix(f"all entries within zero_tol={zero_tol}")
    nnz = (absx > zero_tol).sum(axis=0)
    dense = nnz >= dense_fraction * rows
    v = int(dense.sum())
    t1 = int(nnz[dense].max()) if v > 0 else 0
    t2 = int(nnz[~dense].max()) if v < cols else 0
    if v == 0:
        kind = Kind.T2
    elif v == cols or 2 * v > cols:
        kind = Kind.DENSE
    else:
        kind = Kind.T1
    return SparsityProfile(
        v=v, t1=t1, t2=t2, c=c, kind=kind, nnz_per_column=tuple(int(k) for k in nnz)
    )


def validate_settings(rows, cols):
    """Check the admissible-size inequalities for the rounding analysis.

    Takes dimensions rather than a matrix so that sizes too large to
    materialize can still be checked. Returns the list of violated
    conditions (empty = admissible).
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    u = UNIT_ROUNDOFF
    violations = []
    if rows * cols * u > 1.0 / 64.0:
        violations.append("rows*cols*u <= 1/64")
    if cols * (cols + 1) * u > 1.0 / 64.0:
        violations.append("cols*(cols+1)*u <= 1/64")
    return violations

"""Cholesky-based orthogonalization pipelines.

Single-pass CholeskyQR, the two-pass refinement, the shifted single pass,
the three-pass shifted pipeline, and sparse-aware drivers that profile the
matrix and plan the shift before factorizing. Breakdown is a recorded
outcome (succeeded=False plus the failing stage and pivot), never an
exception escaping these drivers, so sweep harnesses can tabulate it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import Breakdown, as_tall, cholesky, gram, spectral, tri_solve_rows
from .shift import plan_shift
from .sparsity import profile


@dataclass(frozen=True)
class StageRecord:
    stage: str
    shift: float
    breakdown: bool
    pivot_index: int | None


@dataclass
class QrOutcome:
    """Result of one orthogonalization pipeline.

    q and r are None when succeeded is False; stage_log holds one record per
    attempted stage, the last one carrying the breakdown pivot on failure.
    w is the first-stage factor, retained only on request (bound checking).
    """

    q: np.ndarray | None
    r: np.ndarray | None
    stage_log: list = field(default_factory=list)
    succeeded: bool = True
    w: np.ndarray | None = None

    @property
    def breakdown_stage(self):
        """1-based index of the stage that broke down, or None."""
        for i, rec in enumerate(self.stage_log, start=1):
            if rec.breakdown:
                return i
        return None


def _one_pass(x, s, stage_name):
    """One Gram/Cholesky/solve pass; returns (q, r) or a failed QrOutcome."""
    g = gram(x)
    if s != 0.0:
        g[np.diag_indices_from(g)] += s
    try:
        r = cholesky(g)
    except Breakdown as e:
        return None, None, StageRecord(stage_name, s, True, e.pivot_index)
    q = tri_solve_rows(x, r)
    return q, r, StageRecord(stage_name, s, False, None)


def shifted_cholesky_qr(x, s):
    """Single-pass Cholesky orthogonalization of G + sI.

    With s = 0 the output is bit-identical to cholesky_qr (the shift
    addition is skipped entirely, not added as zero).
    """
    a = as_tall(x)
    if not (s >= 0.0 and np.isfinite(s)):
        raise ValueError(f"shift must be finite and >= 0, got {s}")
    q, r, rec = _one_pass(a, float(s), "stage1")
    if rec.breakdown:
        return QrOutcome(None, None, [rec], succeeded=False)
    return QrOutcome(q, r, [rec], succeeded=True)


def cholesky_qr(x):
    """Single-pass Cholesky orthogonalization: G = XᵀX, R = chol(G), Q = XR⁻¹."""
    return shifted_cholesky_qr(x, 0.0)


def cholesky_qr2(x):
    """Two-pass Cholesky orthogonalization; R is the triangular product ZY."""
    a = as_tall(x)
    w, y, rec1 = _one_pass(a, 0.0, "stage1")
    if rec1.breakdown:
        return QrOutcome(None, None, [rec1], succeeded=False)
    q, z, rec2 = _one_pass(w, 0.0, "stage2")
    if rec2.breakdown:
        return QrOutcome(None, None, [rec1, rec2], succeeded=False)
    return QrOutcome(q, z @ y, [rec1, rec2], succeeded=True)


def shifted_cholesky_qr3(x, s, keep_w=False):
    """Shifted first pass followed by two unshifted refinement passes.

    R accumulates right-to-left as J(DY): the first-pass factor Y is
    multiplied by the stage-2 factor D, then by the stage-3 factor J, so
    each product pairs a freshly computed factor with the running result.
    """
    a = as_tall(x)
    if not (s >= 0.0 and np.isfinite(s)):
        raise ValueError(f"shift must be finite and >= 0, got {s}")
    w, y, rec1 = _one_pass(a, float(s), "stage1")
    if rec1.breakdown:
        return QrOutcome(None, None, [rec1], succeeded=False)
    v, d, rec2 = _one_pass(w, 0.0, "stage2")
    if rec2.breakdown:
        return QrOutcome(None, None, [rec1, rec2], succeeded=False,
                         w=w if keep_w else None)
    q, j, rec3 = _one_pass(v, 0.0, "stage3")
    if rec3.breakdown:
        return QrOutcome(None, None, [rec1, rec2, rec3], succeeded=False,
                         w=w if keep_w else None)
    r = j @ (d @ y)
    return QrOutcome(q, r, [rec1, rec2, rec3], succeeded=True,
                     w=w if keep_w else None)


def sparse_scholqr(x, zero_tol=0.0, dense_fraction=0.25):
    """Profile, plan the shift, run the shifted single pass.

    Returns (outcome, plan, profile) so harnesses can report the branch and
    constants alongside the factorization result.
    """
    a = as_tall(x)
    prof = profile(a, zero_tol=zero_tol, dense_fraction=dense_fraction)
    plan = plan_shift(prof, spectral(a), a.shape[0], a.shape[1])
    return shifted_cholesky_qr(a, plan.s), plan, prof


def sparse_scholqr3(x, zero_tol=0.0, dense_fraction=0.25, keep_w=False):
    """Profile, plan the shift, run the three-pass shifted pipeline."""
    a = as_tall(x)
    prof = profile(a, zero_tol=zero_tol, dense_fraction=dense_fraction)
    plan = plan_shift(prof, spectral(a), a.shape[0], a.shape[1])
    return shifted_cholesky_qr3(a, plan.s, keep_w=keep_w), plan, prof

"""Accuracy metrics and closed-form bound evaluation.

metrics() measures orthogonality and residual of a finished factorization;
evaluate_bounds() instantiates every a-priori bound with the run's own
constants and records whether the measured values stay inside them. A run
that violates any bound is the interesting event, so the report keeps each
bound separately rather than collapsing to a single flag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import UNIT_ROUNDOFF
from .shift import Branch, kappa_sufficient


class FailedOutcome(ValueError):
    """Metrics requested for an outcome that broke down."""


class BranchMismatch(ValueError):
    """Requested bound family disagrees with the planned branch."""


@dataclass(frozen=True)
class ErrorMetrics:
    orthogonality: float
    residual_abs: float
    residual_rel: float


@dataclass(frozen=True)
class BoundReport:
    """Every bound instantiated for one run, next to its verdict.

    resid_bound_enc is the remark-form residual bound, present only when an
    ENC report was supplied and held; it is reported alongside the primary
    bound, not asserted as tighter. stage1_resid_bound covers the first-pass
    factor only and is diagnostic, not part of all_satisfied.
    """

    branch: Branch
    kappa_sufficient: float
    kappa_admissible_U: float
    orth_bound: float
    resid_bound: float
    resid_bound_enc: float | None
    stage1_resid_bound: float
    kappa_w_bound: float
    all_satisfied: bool


def metrics(x, out):
    """Frobenius-norm orthogonality and residual of a successful outcome."""
    if not out.succeeded:
        raise FailedOutcome("factorization broke down; no Q/R to measure")
    n = out.q.shape[1]
    orthogonality = float(np.linalg.norm(out.q.T @ out.q - np.eye(n)))
    residual_abs = float(np.linalg.norm(out.q @ out.r - x))
    residual_rel = residual_abs / float(np.linalg.norm(x, 2))
    return ErrorMetrics(orthogonality, residual_abs, residual_rel)


def orthogonality_bound(m, n):
    """Size-only orthogonality bound; bit-identical for equal (m, n)."""
    u = UNIT_ROUNDOFF
    return 6.0 * (m * n * u + n * (n + 1) * u)


def evaluate_bounds(plan, spec, met, kappa_w_measured, m, n, enc=None,
                    branch=None):
    """Instantiate the planned branch's bounds and compare with measurements.

    kappa_w_measured is the condition number of the retained first-stage
    factor, or None when it was not kept (its check is then skipped).
    branch, when given, asserts which bound family the caller expects.
    """
    if branch is not None and branch != plan.branch:
        raise BranchMismatch(
            f"plan selected {plan.branch.value}, caller expects {branch.value}")
    u = UNIT_ROUNDOFF
    nsq_u = n * n * u
    smax = spec.sigma_max
    orth_bound = orthogonality_bound(m, n)
    alpha0 = plan.s / (smax * smax)
    growth = math.sqrt(1.0 + alpha0 * spec.kappa2 * spec.kappa2)
    if plan.branch is Branch.ALTERNATIVE:
        resid_bound = (2.19 + 3.4 * plan.l) * plan.h * nsq_u * smax
        stage1_resid_bound = 1.03 * plan.h * plan.l * nsq_u * smax
        kappa_w_bound = 2.0 * plan.h * growth
    else:
        resid_bound = (6.57 * plan.p + 4.81) * nsq_u * smax
        stage1_resid_bound = 1.6 * nsq_u * spec.gnorm
        kappa_w_bound = 3.24 * growth
    resid_bound_enc = None
    if enc is not None and enc.satisfied and plan.branch is Branch.ALTERNATIVE:
        resid_bound_enc = (2.79 + 3.97 * enc.beta) * plan.h * nsq_u * smax
    ok = (met.orthogonality <= orth_bound
          and met.residual_abs <= resid_bound
          and (kappa_w_measured is None or kappa_w_measured <= kappa_w_bound))
    return BoundReport(
        branch=plan.branch,
        kappa_sufficient=kappa_sufficient(plan, enc, m, n),
        kappa_admissible_U=plan.kappa_bound_U,
        orth_bound=orth_bound,
        resid_bound=resid_bound,
        resid_bound_enc=resid_bound_enc,
        stage1_resid_bound=stage1_resid_bound,
        kappa_w_bound=kappa_w_bound,
        all_satisfied=bool(ok),
    )

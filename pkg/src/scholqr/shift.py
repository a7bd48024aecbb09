"""Shift selection for shifted Cholesky orthogonalization.

Two candidate shifts are computed from the sparsity profile: the
sparsity-aware value 11(mu+(n+1)u)(v t1 + n t2)c^2 and the column-norm
value 11(mnu+n(n+1)u)[X]_g^2. The smaller is selected; T2 and Dense
profiles always use the column-norm branch. The plan also carries the
admissible shift window, the condition-number admissibility bound, and the
derived constants (h, l, p, k, r) used by the bound evaluators.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .matcore import UNIT_ROUNDOFF, SpectralSummary
from .sparsity import Kind, SparsityProfile


class Branch(enum.Enum):
    ALTERNATIVE = "alternative"
    ORIGINAL = "original"


@dataclass(frozen=True)
class ShiftPlan:
    s_alt: float
    s_orig: float
    s: float
    branch: Branch
    j_b: float
    phi: float
    kappa_bound_U: float
    h: float
    l: float
    p: float
    k: float
    r: float
    window_ok: bool
    dense_fallback: bool

    @property
    def constants(self):
        return {"h": self.h, "l": self.l, "p": self.p, "k": self.k, "r": self.r}


@dataclass(frozen=True)
class EncReport:
    beta: float
    beta_limit: float
    satisfied: bool
    epsilon: float


def plan_shift(prof: SparsityProfile, spec: SpectralSummary, m, n,
               force_branch=None):
    """Select the shift and derive the analysis constants.

    The candidate formulas use the exactly accumulated squares c*c and
    gnorm_sq in a fixed evaluation order; the selected value is the minimum,
    with ties and all non-T1 profiles resolving to the column-norm branch.
    window_ok reports s <= j_b; a violation is reported, never clamped.

    force_branch overrides the selection (for branch comparison sweeps).
    Forcing the sparsity-aware branch on a profile with no dense columns
    yields degenerate constants (h, l are inf/0); they are reported as-is.
    """
    if n < 1 or m < n:
        raise ValueError(f"need m >= n >= 1, got m={m} n={n}")
    u = UNIT_ROUNDOFF
    csq = prof.c * prof.c
    weight = prof.v * prof.t1 + n * prof.t2
    s_alt = 11.0 * (m * u + (n + 1) * u) * weight * csq
    s_orig = 11.0 * (m * n * u + n * (n + 1) * u) * spec.gnorm_sq
    if force_branch is not None:
        branch = Branch(force_branch)
        s = s_alt if branch is Branch.ALTERNATIVE else s_orig
    elif prof.kind is Kind.T1 and s_alt < s_orig:
        branch = Branch.ALTERNATIVE
        s = s_alt
    else:
        branch = Branch.ORIGINAL
        s = s_orig

    phi = min((1.0 / (100.0 * n)) * weight * csq, 0.01 * prof.t1 * csq)
    j_b = phi if branch is Branch.ALTERNATIVE else 0.01 * spec.gnorm_sq

    l = prof.c * math.sqrt(prof.t1) / spec.sigma_max
    if prof.v > 0:
        r = n * math.sqrt(n) / (m * math.sqrt(prof.v))
        h = math.sqrt(2.23 + 0.34 * r + 0.013 * r * r)
    else:
        r = math.inf
        h = math.inf
    p = spec.gnorm / spec.sigma_max
    k = weight * csq / (spec.sigma_max * spec.sigma_max)

    n2u = n * n * u
    if branch is Branch.ALTERNATIVE:
        kappa_bound_U = 1.0 / (4.0 * n2u * h * l)
    else:
        kappa_bound_U = 1.0 / (4.89 * p * n2u)

    return ShiftPlan(
        s_alt=s_alt,
        s_orig=s_orig,
        s=s,
        branch=branch,
        j_b=j_b,
        phi=phi,
        kappa_bound_U=kappa_bound_U,
        h=h,
        l=l,
        p=p,
        k=k,
        r=r,
        window_ok=s <= j_b,
        dense_fallback=prof.kind is Kind.DENSE,
    )


def check_enc(prof: SparsityProfile, spec: SpectralSummary, m, n):
    """Evaluate the element-norm condition for the sparsity-aware shift.

    beta is defined by c = sqrt(beta/m) * ||X||_2, i.e. beta = c^2 m / ||X||_2^2;
    the condition is beta <= m n p^2 / (v t1 + n t2). epsilon = beta (v t1 + n t2) / m
    feeds the epsilon form of the sufficient condition.
    """
    weight = prof.v * prof.t1 + n * prof.t2
    beta = prof.c * prof.c * m / (spec.sigma_max * spec.sigma_max)
    p = spec.gnorm / spec.sigma_max
    beta_limit = m * n * p * p / weight
    epsilon = beta * weight / m
    return EncReport(
        beta=beta, beta_limit=beta_limit, satisfied=beta <= beta_limit, epsilon=epsilon
    )


def kappa_sufficient(plan: ShiftPlan, enc, m, n):
    """Sufficient condition on kappa_2(X) for the active branch.

    Alternative branch: 1 / (16 sqrt(11 n k) (mu + (n+1)u) h). With a
    measured beta the epsilon form coincides with this value identically
    (epsilon == k), so one number covers both.
    Original branch: 1 / (86 p (mnu + n(n+1)u)).
    """
    u = UNIT_ROUNDOFF
    if plan.branch is Branch.ALTERNATIVE:
        k = enc.epsilon if (enc is not None and enc.satisfied) else plan.k
        return 1.0 / (16.0 * math.sqrt(11.0 * n * k) * (m * u + (n + 1) * u) * plan.h)
    return 1.0 / (86.0 * plan.p * (m * n * u + n * (n + 1) * u))

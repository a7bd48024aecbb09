"""Scikit-learn style transformer wrapping the shifted pipeline.

CholeskyOrthogonalizer fits an orthonormal basis Q and triangular factor R
of a tall-skinny X via the three-pass shifted pipeline; transform maps new
rows into the fitted basis coordinates. Parameters follow the estimator
convention (all in __init__, fitted state suffixed with an underscore), so
the class composes with sklearn pipelines and clone().
"""
from __future__ import annotations

import numbers
from dataclasses import replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import bounds as _bounds
from .algos import shifted_cholesky_qr3
from .matcore import Breakdown, spectral, tri_solve_rows
from .shift import Branch, check_enc, plan_shift
from .sparsity import profile


class CholeskyOrthogonalizer(TransformerMixin, BaseEstimator):
    """Orthonormalize a tall-skinny matrix with a planned diagonal shift.

    Parameters
    ----------
    shift : "auto", "alternative", "original", or nonnegative float
        "auto" profiles the matrix and picks the smaller admissible shift;
        the two branch names force that branch's formula; a float is used
        verbatim (0.0 gives the unshifted three-pass method).
    zero_tol : float
        Entries at or below this magnitude count as zeros when profiling.
    dense_fraction : float
        Column density threshold for the profile.
    check_bounds : bool
        When True, fit retains the first-stage factor, measures accuracy,
        and stores a bound report in ``bounds_`` and ``metrics_``.

    Attributes
    ----------
    q_, r_ : ndarray
        The orthonormal basis and triangular factor of the fitted matrix.
    profile_, plan_, outcome_ : sparsity/shift/pipeline records of the fit.

    Raises Breakdown from fit when a Cholesky pivot fails; the exception
    carries the 1-based pipeline stage.
    """

    def __init__(self, shift="auto", zero_tol=0.0, dense_fraction=0.25,
                 check_bounds=False):
        self.shift = shift
        self.zero_tol = zero_tol
        self.dense_fraction = dense_fraction
        self.check_bounds = check_bounds

    def _resolve_shift(self, x):
        if isinstance(self.shift, str):
            if self.shift not in ("auto", "alternative", "original"):
                raise ValueError(
                    f"shift must be 'auto', 'alternative', 'original', or a "
                    f"nonnegative number, got {self.shift!r}")
            force = None if self.shift == "auto" else Branch(self.shift)
        elif isinstance(self.shift, numbers.Real):
            force = None
        else:
            raise ValueError(f"unsupported shift {self.shift!r}")
        prof = profile(x, zero_tol=self.zero_tol,
                       dense_fraction=self.dense_fraction)
        spec = spectral(x)
        plan = plan_shift(prof, spec, x.shape[0], x.shape[1],
                          force_branch=force)
        if isinstance(self.shift, numbers.Real):
            s = float(self.shift)
        else:
            s = plan.s
        return prof, spec, plan, s

    def fit(self, X, y=None):
        x = check_array(X, dtype=np.float64, ensure_min_samples=2)
        if x.shape[0] < x.shape[1]:
            raise ValueError(
                f"need n_samples >= n_features, got {x.shape}")
        self.profile_, spec, self.plan_, s = self._resolve_shift(x)
        out = shifted_cholesky_qr3(x, s, keep_w=self.check_bounds)
        self.outcome_ = out
        if not out.succeeded:
            stage = out.breakdown_stage
            raise Breakdown(out.stage_log[-1].pivot_index, stage=stage)
        self.q_ = out.q
        self.r_ = out.r
        self.n_features_in_ = x.shape[1]
        if self.check_bounds:
            plan = self.plan_
            if s != plan.s:
                plan = replace(plan, s=s, window_ok=s <= plan.j_b)
            self.metrics_ = _bounds.metrics(x, out)
            kappa_w = spectral(out.w).kappa2
            enc = check_enc(self.profile_, spec, *x.shape)
            self.bounds_ = _bounds.evaluate_bounds(
                plan, spec, self.metrics_, kappa_w, *x.shape, enc=enc)
        return self

    def fit_transform(self, X, y=None):
        """Fit and return the orthonormal basis itself (not a re-solve)."""
        return self.fit(X, y).q_

    def transform(self, X):
        """Coordinates of rows of X in the fitted basis: X R^{-1}."""
        check_is_fitted(self, "r_")
        x = check_array(X, dtype=np.float64)
        if x.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {x.shape[1]} features, expected {self.n_features_in_}")
        return tri_solve_rows(x, self.r_)

    def inverse_transform(self, Xt):
        """Map basis coordinates back: Xt R."""
        check_is_fitted(self, "r_")
        xt = check_array(Xt, dtype=np.float64)
        if xt.shape[1] != self.n_features_in_:
            raise ValueError(
                f"Xt has {xt.shape[1]} features, expected {self.n_features_in_}")
        return xt @ self.r_

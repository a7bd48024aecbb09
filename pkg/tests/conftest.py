"""Shared fixtures: the two benchmark sweeps, computed once per session."""
import time

import numpy as np
import pytest

from scholqr import (check_enc, gen_arrowhead_t1, gen_block_t2, metrics,
                     plan_shift, profile, spectral)
from scholqr.algos import shifted_cholesky_qr3

T1_KNOBS = (3e-6, 3e-8, 3e-10, 3e-12, 3e-14)
T1_KAPPAS = (2.18e7, 1.99e9, 1.81e11, 1.63e13, 1.46e15)
T2_KNOBS = (1e-5, 1e-7, 1e-9, 1e-11, 1e-13)
T2_KAPPAS = (1.30e7, 1.29e9, 1.28e11, 1.28e13, 1.28e15)


def qr_oracle(x):
    """Reference factorization with the positive-diagonal sign convention."""
    q, r = np.linalg.qr(x)
    d = np.sign(np.diag(r))
    d[d == 0.0] = 1.0
    return q * d, r * d[:, None]


def _run_grid(gen, knobs):
    rows = []
    for knob in knobs:
        x = gen(2048, 64, knob)
        prof = profile(x)
        spec = spectral(x)
        plan = plan_shift(prof, spec, 2048, 64)
        t0 = time.perf_counter()
        out = shifted_cholesky_qr3(x, plan.s, keep_w=True)
        wall = time.perf_counter() - t0
        met = metrics(x, out) if out.succeeded else None
        rows.append({
            "knob": knob, "x": x, "prof": prof, "spec": spec, "plan": plan,
            "out": out, "met": met, "wall": wall,
            "enc": check_enc(prof, spec, 2048, 64),
            "kappa_w": spectral(out.w).kappa2 if out.w is not None else None,
        })
    return rows


@pytest.fixture(scope="session")
def t1_grid():
    return _run_grid(gen_arrowhead_t1, T1_KNOBS)


@pytest.fixture(scope="session")
def t2_grid():
    return _run_grid(gen_block_t2, T2_KNOBS)

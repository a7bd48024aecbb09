import numpy as np
import pytest

from scholqr.algos import (QrOutcome, cholesky_qr, cholesky_qr2,
                           shifted_cholesky_qr, shifted_cholesky_qr3,
                           sparse_scholqr, sparse_scholqr3)
from scholqr.gen import gen_arrowhead_t1, gen_dense_svd
from scholqr.shift import Branch

from conftest import qr_oracle


def orth_err(q):
    return np.linalg.norm(q.T @ q - np.eye(q.shape[1]))


class TestCholeskyQr:
    def test_orthonormal_input_is_fixed_point(self):
        q0, _ = qr_oracle(np.random.default_rng(0).standard_normal((40, 6)))
        out = cholesky_qr(q0)
        assert out.succeeded
        assert np.allclose(out.q, q0, atol=1e-14)
        assert np.allclose(out.r, np.eye(6), atol=1e-14)

    def test_well_conditioned(self):
        x = gen_dense_svd(50, 5, 1e-3, 5)
        out = cholesky_qr(x)
        assert out.succeeded
        # single pass at kappa ~1e3: error ~kappa^2 u, far above u
        assert orth_err(out.q) < 1e-10
        assert np.allclose(out.q @ out.r, x, atol=1e-14)

    def test_r_is_upper_with_positive_diagonal(self):
        out = cholesky_qr(np.random.default_rng(1).standard_normal((30, 7)))
        assert np.array_equal(out.r, np.triu(out.r))
        assert np.all(np.diag(out.r) > 0)

    def test_breakdown_at_high_kappa(self):
        x = gen_dense_svd(100, 10, 1e-12, 3)
        out = cholesky_qr(x)
        assert not out.succeeded
        assert out.q is None and out.r is None
        assert out.breakdown_stage == 1
        rec = out.stage_log[0]
        assert rec.breakdown and rec.pivot_index == 9

    def test_stage_log(self):
        out = cholesky_qr(np.eye(3))
        assert [r.stage for r in out.stage_log] == ["stage1"]
        assert out.stage_log[0].shift == 0.0


class TestCholeskyQr2:
    def test_reaches_machine_orthogonality(self):
        x = gen_dense_svd(200, 20, 1e-5, 7)
        out = cholesky_qr2(x)
        assert out.succeeded
        assert orth_err(out.q) < 1e-13
        assert np.allclose(out.q @ out.r, x, atol=1e-13)

    def test_stage_log(self):
        out = cholesky_qr2(np.eye(4))
        assert [r.stage for r in out.stage_log] == ["stage1", "stage2"]

    def test_breakdown_propagates(self):
        x = gen_dense_svd(100, 10, 1e-12, 3)
        out = cholesky_qr2(x)
        assert not out.succeeded and out.breakdown_stage == 1


class TestShiftedCholeskyQr:
    def test_zero_shift_bit_equals_plain(self):
        for seed in range(5):
            x = np.random.default_rng(seed).standard_normal((60, 8))
            a = cholesky_qr(x)
            b = shifted_cholesky_qr(x, 0.0)
            assert np.array_equal(a.q, b.q)
            assert np.array_equal(a.r, b.r)

    def test_shift_rescues_breakdown(self):
        x = gen_dense_svd(100, 10, 1e-12, 3)
        assert not cholesky_qr(x).succeeded
        out = shifted_cholesky_qr(x, 1e-14)
        assert out.succeeded

    def test_shift_recorded_in_log(self):
        out = shifted_cholesky_qr(np.eye(3), 0.5)
        assert out.stage_log[0].shift == 0.5

    def test_invalid_shift(self):
        with pytest.raises(ValueError):
            shifted_cholesky_qr(np.eye(3), -1.0)
        with pytest.raises(ValueError):
            shifted_cholesky_qr(np.eye(3), np.nan)
        with pytest.raises(ValueError):
            shifted_cholesky_qr(np.eye(3), np.inf)

    def test_wide_input_rejected(self):
        with pytest.raises(ValueError):
            shifted_cholesky_qr(np.ones((2, 5)), 0.0)


class TestShiftedCholeskyQr3:
    def test_stage_log_and_shifts(self):
        out = shifted_cholesky_qr3(np.eye(5), 0.25)
        assert [r.stage for r in out.stage_log] == ["stage1", "stage2", "stage3"]
        assert [r.shift for r in out.stage_log] == [0.25, 0.0, 0.0]

    def test_high_kappa_arrowhead(self):
        x = gen_arrowhead_t1(2048, 64, 3e-10)
        out, plan, prof = sparse_scholqr3(x)
        assert out.succeeded
        assert orth_err(out.q) < 1e-13
        assert np.all(np.diag(out.r) > 0)

    def test_keep_w(self):
        x = gen_arrowhead_t1(256, 16, 1e-4)
        assert shifted_cholesky_qr3(x, 1e-8).w is None
        out = shifted_cholesky_qr3(x, 1e-8, keep_w=True)
        assert out.w is not None and out.w.shape == x.shape

    def test_breakdown_truncates_stage_log(self):
        # stage 1 with s=0 is the same computation as the single pass above
        x = gen_dense_svd(100, 10, 1e-12, 3)
        out = shifted_cholesky_qr3(x, 0.0)
        assert not out.succeeded
        assert out.q is None and out.r is None
        assert out.breakdown_stage == 1
        assert len(out.stage_log) == 1

    def test_r_accumulation(self):
        # R must equal J(DY) in that multiplication order
        x = gen_arrowhead_t1(256, 16, 1e-3)
        out = shifted_cholesky_qr3(x, 1e-9)
        assert np.allclose(out.q @ out.r, x, rtol=1e-12, atol=1e-12)
        assert np.array_equal(out.r, np.triu(out.r))


class TestOracleEquivalence:
    @pytest.mark.parametrize("m,n,seed", [(12, 3, 0), (50, 8, 1), (25, 5, 2),
                                          (40, 8, 3), (17, 4, 4)])
    def test_matches_reference_qr(self, m, n, seed):
        # kappa <= 1e3 keeps the single-pass error below the comparison tol
        x = gen_dense_svd(m, n, 1e-3, seed)
        out = cholesky_qr(x)
        q_ref, r_ref = qr_oracle(x)
        assert np.allclose(out.q, q_ref, atol=1e-10)
        assert np.allclose(out.r, r_ref, atol=1e-10)


class TestScaleCovariance:
    def test_power_of_two_scaling_is_exact(self):
        x = np.random.default_rng(9).standard_normal((30, 6))
        base = cholesky_qr(x)
        scaled = cholesky_qr(4.0 * x)
        assert np.array_equal(scaled.q, base.q)
        assert np.array_equal(scaled.r, 4.0 * base.r)

    def test_general_scaling(self):
        x = np.random.default_rng(10).standard_normal((30, 6))
        base = cholesky_qr(x)
        scaled = cholesky_qr(3.0 * x)
        assert np.allclose(scaled.q, base.q, atol=1e-13)
        assert np.allclose(scaled.r, 3.0 * base.r, rtol=1e-13)


class TestSparseWrappers:
    def test_returns_consistent_triple(self):
        x = gen_arrowhead_t1(512, 32, 1e-5)
        out, plan, prof = sparse_scholqr(x)
        assert out.succeeded
        assert prof.v == 1
        assert out.stage_log[0].shift == plan.s

    def test_three_pass_wrapper(self):
        x = gen_arrowhead_t1(512, 32, 1e-5)
        out, plan, prof = sparse_scholqr3(x, keep_w=True)
        assert out.succeeded and out.w is not None
        assert plan.branch in (Branch.ALTERNATIVE, Branch.ORIGINAL)
        assert len(out.stage_log) == 3

    def test_profile_options_forwarded(self):
        x = np.array([[1.0, 1e-13], [1.0, 1e-13], [1.0, 1.0], [1.0, 1.0]])
        _, _, prof = sparse_scholqr(x, zero_tol=1e-9, dense_fraction=0.9)
        assert prof.nnz_per_column == (4, 2)


def test_outcome_defaults():
    out = QrOutcome(None, None, [], succeeded=False)
    assert out.breakdown_stage is None
    assert out.w is None

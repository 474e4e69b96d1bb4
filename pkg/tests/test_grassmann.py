import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcpositivity import zoo
from rcpositivity.functionals import Subspace, random_unitary
from rcpositivity.grassmann import (
    KINDS,
    CallableObjective,
    KyFanObjective,
    ScalarKObjective,
    brute_force_certify,
    certify,
    fd_gradient,
    fermi_weights,
    inner_max_over_fibers,
    inner_min_over_fibers,
    ky_fan,
    optimize_subspace,
    riemannian_gradient,
)
from rcpositivity.tensor import change_frame


class TestInner:
    def test_diag(self):
        value, sigma = inner_min_over_fibers(np.diag([3.0, 1.0, 2.0]), 2)
        assert value == pytest.approx(3.0)
        assert sigma.contains([0, 1, 0]) and sigma.contains([0, 0, 1])
        value, sigma = inner_max_over_fibers(np.diag([3.0, 1.0, 2.0]), 1)
        assert value == pytest.approx(3.0) and sigma.contains([1, 0, 0])

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_identity(self, l):
        assert inner_min_over_fibers(np.eye(3), l)[0] == pytest.approx(l)

    def test_range(self):
        with pytest.raises(ValueError):
            ky_fan(np.eye(2), 3)
        with pytest.raises(ValueError):
            ky_fan(np.eye(2), 0)

    @pytest.mark.parametrize("seed", range(3))
    def test_sampling_oracle(self, seed):
        # rank-2 fiber: the sampled Rayleigh minimum converges like 1/N there
        rng = np.random.default_rng(seed)
        B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        A = B + B.conj().T
        value, _ = inner_min_over_fibers(A, 1)
        u = rng.standard_normal((100_000, 2)) + 1j * rng.standard_normal((100_000, 2))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        q = np.einsum("Na,ab,Nb->N", u.conj(), A, u).real
        assert q.min() >= value - 1e-12
        assert q.min() - value <= 5e-3

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 5), data=st.data())
    def test_ky_fan_never_beaten(self, seed, d, data):
        l = data.draw(st.integers(1, d))
        rng = np.random.default_rng(seed)
        B = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        A = B + B.conj().T
        lo, _ = inner_min_over_fibers(A, l)
        hi, _ = inner_max_over_fibers(A, l)
        for _ in range(50):
            F = Subspace.random(d, l, rng).frame
            t = np.trace(F.conj().T @ A @ F).real
            assert lo - 1e-10 <= t <= hi + 1e-10


class TestSmoothing:
    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 6), mu=st.sampled_from([1e-1, 1e-3, 1e-8]), data=st.data())
    def test_weights(self, seed, d, mu, data):
        count = data.draw(st.integers(1, d))
        largest = data.draw(st.booleans())
        w = np.sort(np.random.default_rng(seed).standard_normal(d))
        p = fermi_weights(w, count, mu, largest)
        assert np.all((p >= 0) & (p <= 1)) and p.sum() == pytest.approx(count, abs=1e-10)
        # more weight on the selected end
        assert np.all(np.diff(p) >= -1e-12) if largest else np.all(np.diff(p) <= 1e-12)

    @pytest.mark.parametrize("largest", [False, True])
    def test_bounds(self, largest):
        R = zoo.random_hermitian(3, 4, 1)
        obj = KyFanObjective(R, "base", 2, largest)
        rng = np.random.default_rng(0)
        mu = 1e-2
        sm = obj.smoothed(mu)
        for _ in range(20):
            F = Subspace.random(3, 2, rng).frame
            f, fs = obj.value(F), sm.value(F)
            gap = (fs - f) if largest else (f - fs)
            assert -1e-12 <= gap <= mu * 4 * np.log(2) + 1e-12

    @pytest.mark.parametrize("side", ["base", "fiber"])
    def test_smoothed_gradient(self, side):
        R = zoo.random_hermitian(3, 3, 2)
        sm = KyFanObjective(R, side, 1, False).smoothed(0.05)
        F = Subspace.random(3, 2, np.random.default_rng(1)).frame
        G = riemannian_gradient(sm, F)
        Gf = fd_gradient(sm, F)
        np.testing.assert_allclose(G, Gf - F @ (F.conj().T @ Gf), atol=1e-7)

    def test_scalar_k_gradient(self):
        obj = ScalarKObjective(zoo.random_ckl(4, 3))
        F = Subspace.random(4, 2, np.random.default_rng(2)).frame
        Gf = fd_gradient(obj, F)
        np.testing.assert_allclose(riemannian_gradient(obj, F), Gf - F @ (F.conj().T @ Gf), atol=1e-7)


class TestOptimize:
    def test_fubini_study_constant(self):
        for k in (1, 2):
            res = optimize_subspace(ScalarKObjective(zoo.fubini_study(3)), k, maximize=False, restarts=3)
            assert res.value == pytest.approx(k * (k + 1), abs=1e-12) and res.converged

    def test_product_min_H(self):
        P = zoo.product(zoo.fubini_study(1), zoo.fubini_study(1))
        res = optimize_subspace(ScalarKObjective(P), 1, maximize=False, restarts=4)
        assert res.value == pytest.approx(1.0, abs=1e-10)
        x = res.subspace.frame[:, 0]
        assert abs(x[0]) ** 2 == pytest.approx(0.5, abs=1e-5)

    def test_full_space(self):
        R = zoo.random_ckl(3, 0)
        res = optimize_subspace(ScalarKObjective(R), 3)
        assert res.value == pytest.approx(np.einsum("iijj->", R.entries).real)
        assert res.subspace.k == 3

    def test_k_range(self):
        with pytest.raises(ValueError):
            optimize_subspace(ScalarKObjective(zoo.flat(2)), 3)

    def test_callable_objective(self):
        # max of |<e1, x>|^2 over lines; nonsmooth-free but gradient by finite differences
        obj = CallableObjective(lambda F: float(np.abs(F[0, 0]) ** 2), 3)
        res = optimize_subspace(obj, 1, maximize=True, restarts=2)
        assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_deterministic(self):
        obj = KyFanObjective(zoo.random_hermitian(3, 3, 5), "base", 1, False)
        a = optimize_subspace(obj, 2, seed=3, restarts=4)
        b = optimize_subspace(obj, 2, seed=3, restarts=4)
        assert a.value == b.value and a.restart_values == b.restart_values
        np.testing.assert_array_equal(a.subspace.frame, b.subspace.frame)


class TestCertify:
    @pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (3, 2), (4, 2)])
    def test_fubini_study(self, n, k):
        cert = certify(zoo.fubini_study(n), "uniform-rc", k, 1)
        assert cert.value == pytest.approx(k, abs=1e-9) and cert.positive

    @pytest.mark.parametrize("kind", KINDS)
    def test_zero(self, kind):
        cert = certify(zoo.flat(2), kind, 1, 1, restarts=2)
        assert cert.value == 0 and not cert.positive
        assert brute_force_certify(zoo.flat(2), kind, 1, 1, resolution=100) == 0

    def test_errors(self):
        R = zoo.flat(2, 3)
        with pytest.raises(ValueError):
            certify(R, "nope", 1, 1)
        with pytest.raises(ValueError):
            certify(R, "bc", 3, 1)
        with pytest.raises(ValueError):
            certify(R, "bc", 1, 4)
        with pytest.raises(ValueError):
            certify([], "bc", 1, 1)

    def test_points_minimum(self):
        a, b = zoo.fubini_study(3), zoo.fubini_study(3, c=1.0)
        cert = certify(a, "uniform-rc", 2, 1, points=[b], restarts=3)
        assert cert.point_values == pytest.approx((2.0, 1.0)) and cert.value == pytest.approx(1.0)
        assert len(cert.witnesses) == 2

    def test_report_fields(self):
        d = certify(zoo.fubini_study(2), "bc", 1, 1, restarts=2, seed=4).to_dict()
        assert {"kind", "k", "l", "value", "positive", "point_values", "witnesses", "restarts", "converged", "seed"} <= set(d)
        w = d["witnesses"][0]
        assert np.array(w["outer"]).shape == (2, 1, 2)

    def test_witness_attains_value(self):
        R = zoo.random_hermitian(3, 3, 8)
        cert = certify(R, "uniform-rc", 2, 2, restarts=4)
        w = cert.witnesses[0]
        A = np.einsum("ijab,ij->ba", R.entries, w.outer.projector)
        assert np.trace(w.inner.frame.conj().T @ A @ w.inner.frame).real == pytest.approx(cert.value, abs=1e-10)

    @pytest.mark.parametrize("seed", range(4))
    def test_weak_duality(self, seed):
        R = zoo.random_hermitian(3, 3, seed)
        for k, l in [(1, 1), (2, 1), (1, 2)]:
            v = {kind: certify(R, kind, k, l, restarts=8).value for kind in KINDS}
            assert v["uniform-rc"] <= v["rc"] + 1e-9
            assert v["uniform-bc"] <= v["bc"] + 1e-9
            assert v["griffiths"] <= min(v.values()) + 1e-9

    @pytest.mark.parametrize("seed", range(6))
    def test_griffiths_monotone(self, seed):
        R = zoo.random_hermitian(3, 3, seed) + zoo.fubini_study(3).scaled(0.2 * seed)
        for k in (1, 2):
            for l in (1, 2):
                if certify(R, "griffiths", k, l, restarts=8).positive:
                    assert certify(R, "griffiths", k + 1, l, restarts=8).positive
                    assert certify(R, "griffiths", k, l + 1, restarts=8).positive

    @pytest.mark.parametrize("kind", KINDS)
    def test_frame_gauge_invariance(self, kind):
        R = zoo.random_hermitian(3, 3, 11)
        rng = np.random.default_rng(11)
        S = change_frame(R, random_unitary(3, rng), random_unitary(3, rng))
        assert certify(S, kind, 2, 1).value == pytest.approx(certify(R, kind, 2, 1).value, abs=1e-9)

    def test_random_ckl_vs_brute(self):
        R = zoo.random_ckl(3, 4)
        for kind in KINDS:
            opt = certify(R, kind, 1, 1).value
            brute = brute_force_certify(R, kind, 1, 1)
            assert abs(opt - brute) <= 5e-2
            if kind in ("uniform-rc", "uniform-bc"):
                assert opt >= brute
            else:
                assert opt <= brute


class TestBruteForce:
    @pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (3, 2)])
    def test_fubini_study(self, n, k):
        v = brute_force_certify(zoo.fubini_study(n), "uniform-rc", k, 1)
        assert k - 5e-3 <= v <= k + 1e-12

    def test_deterministic(self):
        R = zoo.random_hermitian(2, 2, 0)
        assert brute_force_certify(R, "bc", 1, 1, seed=2) == brute_force_certify(R, "bc", 1, 1, seed=2)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcpositivity import zoo
from rcpositivity.functionals import (
    DirectionMatrix,
    Subspace,
    averaged_form,
    chern_ricci,
    chern_scalar,
    direction_matrix,
    direction_matrix_sum,
    evaluate,
    holo_sectional,
    random_unit_vector,
    random_unitary,
    rc_form,
    ricci_form,
    ricci_k,
    sample_summary,
    scalar_k,
)
from rcpositivity.tensor import dual_tensor

seeds = st.integers(0, 2**32 - 1)


def _evaluate_loops(R, X, Y, u, v):
    total = 0j
    for i, j, a, b in np.ndindex(*R.entries.shape):
        total += R.entries[i, j, a, b] * X[i] * np.conj(Y[j]) * u[a] * np.conj(v[b])
    return total


class TestSubspace:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            Subspace(np.eye(3)[:2])

    def test_from_vectors_and_contains(self):
        S = Subspace.from_vectors(np.array([[1.0, 1.0], [1.0, 0.0], [0.0, 0.0]]))
        assert S.k == 2 and S.contains([3.0, -1.0, 0.0]) and not S.contains([0, 0, 1.0])
        with pytest.raises(ValueError):
            Subspace.from_vectors(np.array([[1.0, 2.0], [1.0, 2.0]]))

    def test_complement(self):
        S = Subspace.random(4, 2, np.random.default_rng(0))
        C = S.complement()
        np.testing.assert_allclose(S.frame.conj().T @ C.frame, 0, atol=1e-14)
        assert Subspace.full(3).complement() is None

    def test_vector_input(self):
        assert Subspace(np.array([1.0, 0.0])).k == 1


class TestEvaluate:
    def test_fubini_study(self):
        e1 = np.array([1.0, 0.0])
        assert evaluate(zoo.fubini_study(2), e1, e1, e1, e1) == 2.0

    def test_zero(self):
        z = np.ones(2)
        assert evaluate(zoo.flat(2), z, z, z, z) == 0

    def test_dimension_errors(self):
        with pytest.raises(ValueError):
            evaluate(zoo.flat(2), np.ones(3), np.ones(2), np.ones(2), np.ones(2))

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, n=st.integers(1, 3), r=st.integers(1, 3))
    def test_loop_oracle_and_symmetry(self, seed, n, r):
        R = zoo.random_hermitian(n, r, seed)
        rng = np.random.default_rng(seed)
        X, Y = (rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
        u, v = (rng.standard_normal((2, r)) + 1j * rng.standard_normal((2, r)))
        val = evaluate(R, X, Y, u, v)
        assert val == pytest.approx(_evaluate_loops(R, X, Y, u, v), abs=1e-12)
        assert val == pytest.approx(np.conj(evaluate(R, Y, X, v, u)), abs=1e-12)
        d = evaluate(R, X, X, u, u)
        assert abs(d.imag) <= 1e-12 * max(1.0, abs(d))


class TestDirectionMatrix:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_fubini_study_eigenvalues(self, n):
        X = random_unit_vector(n, np.random.default_rng(n))
        np.testing.assert_allclose(direction_matrix(zoo.fubini_study(n), X).eigenvalues, [1.0] * (n - 1) + [2.0])

    def test_zero(self):
        D = direction_matrix(zoo.flat(2, 3), np.ones(2))
        assert isinstance(D, DirectionMatrix) and not np.any(D.matrix)

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            direction_matrix(zoo.fubini_study(2), np.zeros(2))

    def test_operator_convention(self):
        # u^H A u = R(X, Xbar, u, ubar): the matrix acts on fiber vectors
        R = zoo.random_hermitian(2, 3, 4)
        rng = np.random.default_rng(0)
        X, u = random_unit_vector(2, rng), random_unit_vector(3, rng)
        A = direction_matrix(R, X).matrix
        assert u.conj() @ A @ u == pytest.approx(evaluate(R, X, X, u, u), abs=1e-12)
        a, b = 0, 1
        e = np.eye(3)
        assert A[b, a] == pytest.approx(evaluate(R, X, X, e[a], e[b]), abs=1e-12)

    def test_frame_rotation_invariance(self):
        R = zoo.random_hermitian(3, 2, 1)
        rng = np.random.default_rng(1)
        S = Subspace.random(3, 2, rng)
        base = direction_matrix_sum(R, S).eigenvalues
        for _ in range(10):
            np.testing.assert_allclose(direction_matrix_sum(R, S.rotated(random_unitary(2, rng))).eigenvalues, base, atol=1e-12)

    def test_sum_is_sum_over_frame(self):
        R = zoo.random_hermitian(3, 2, 2)
        S = Subspace.random(3, 2, np.random.default_rng(2))
        total = sum(direction_matrix(R, S.frame[:, i]).matrix for i in range(2))
        np.testing.assert_allclose(direction_matrix_sum(R, S).matrix, total, atol=1e-13)

    def test_dual_spectrum(self):
        R = zoo.random_hermitian(3, 3, 5)
        X = random_unit_vector(3, np.random.default_rng(5))
        np.testing.assert_allclose(
            np.sort(-direction_matrix(R, X).eigenvalues), direction_matrix(dual_tensor(R), X).eigenvalues, atol=1e-12
        )


class TestScalarFunctionals:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_fubini_study(self, n):
        R = zoo.fubini_study(n)
        rng = np.random.default_rng(n)
        X = random_unit_vector(n, rng)
        assert holo_sectional(R, 3.0 * X) == pytest.approx(2.0, abs=1e-12)
        assert chern_ricci(R, X) == pytest.approx(n + 1, abs=1e-12)
        assert chern_scalar(R) == pytest.approx(n * (n + 1))
        for k in range(1, n + 1):
            S = Subspace.random(n, k, rng)
            Y = S.frame @ random_unit_vector(k, rng)
            assert ricci_k(R, S, Y) == pytest.approx(k + 1, abs=1e-12)
            assert scalar_k(R, S) == pytest.approx(k * (k + 1), abs=1e-12)

    def test_product_min_H(self):
        P = zoo.product(zoo.fubini_study(1), zoo.fubini_study(1))
        assert holo_sectional(P, np.array([1.0, 1.0])) == pytest.approx(1.0)

    def test_zero(self):
        R = zoo.flat(3)
        X = np.ones(3)
        assert holo_sectional(R, X) == chern_ricci(R, X) == chern_scalar(R) == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            holo_sectional(zoo.flat(2, 3), np.ones(2))
        with pytest.raises(ValueError):
            chern_ricci(zoo.fubini_study(2), np.zeros(2))
        S = Subspace(np.eye(3)[:, :1])
        with pytest.raises(ValueError):
            ricci_k(zoo.fubini_study(3), S, np.array([0.0, 1.0, 0.0]))
        with pytest.raises(ValueError):
            scalar_k(zoo.random_hermitian(2, 1, 0), Subspace.full(2))

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, n=st.integers(1, 4))
    def test_coincidences(self, seed, n):
        R = zoo.random_hermitian(n, n, seed)
        rng = np.random.default_rng(seed)
        X = random_unit_vector(n, rng)
        full = Subspace.full(n)
        assert ricci_k(R, full, X) == pytest.approx(chern_ricci(R, X), abs=1e-12)
        assert scalar_k(R, full) == pytest.approx(chern_scalar(R), abs=1e-12)
        line = Subspace(X[:, None])
        assert ricci_k(R, line, X) == pytest.approx(holo_sectional(R, X), abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, n=st.integers(2, 4), data=st.data())
    def test_rotation_invariance(self, seed, n, data):
        k = data.draw(st.integers(1, n))
        R = zoo.random_hermitian(n, n, seed)
        rng = np.random.default_rng(seed)
        S = Subspace.random(n, k, rng)
        X = S.frame @ random_unit_vector(k, rng)
        u = random_unit_vector(n, rng)
        fib = Subspace.random(n, data.draw(st.integers(1, n)), rng)
        ref = (ricci_k(R, S, X), scalar_k(R, S), rc_form(R, S, u), averaged_form(R, S, fib))
        for _ in range(10):
            S2 = S.rotated(random_unitary(k, rng))
            f2 = fib.rotated(random_unitary(fib.k, rng))
            got = (ricci_k(R, S2, X), scalar_k(R, S2), rc_form(R, S2, u), averaged_form(R, S2, f2))
            np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, n=st.integers(2, 4), data=st.data())
    def test_scalar_is_trace_of_ricci(self, seed, n, data):
        k = data.draw(st.integers(1, n))
        R = zoo.random_hermitian(n, n, seed)
        S = Subspace.random(n, k, np.random.default_rng(seed))
        total = sum(ricci_k(R, S, S.frame[:, i]) for i in range(k))
        assert scalar_k(R, S) == pytest.approx(total, abs=1e-12)
        assert np.trace(ricci_form(R, S)).real == pytest.approx(total, abs=1e-12)
        Y = S.frame @ random_unit_vector(k, np.random.default_rng(seed + 1))
        y = S.frame.conj().T @ Y
        assert (y.conj() @ ricci_form(R, S) @ y).real == pytest.approx(ricci_k(R, S, Y), abs=1e-12)


class TestForms:
    @pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (3, 2), (4, 3)])
    def test_fubini_study_rc_form(self, n, k):
        R = zoo.fubini_study(n)
        S = Subspace(np.eye(n)[:, :k])
        u = np.zeros(n)
        u[-1] = 1.0
        assert rc_form(R, S, u) == pytest.approx(k)
        v = np.zeros(n)
        v[0] = 1.0
        assert rc_form(R, S, v) == pytest.approx(k + 1)

    def test_l1_coincidence(self):
        R = zoo.random_hermitian(3, 2, 3)
        rng = np.random.default_rng(3)
        S = Subspace.random(3, 2, rng)
        u = random_unit_vector(2, rng)
        assert averaged_form(R, S, Subspace(u[:, None])) == pytest.approx(rc_form(R, S, u), abs=1e-12)

    def test_zero(self):
        S = Subspace.full(2)
        assert rc_form(zoo.flat(2, 3), S, np.ones(3)) == 0
        assert averaged_form(zoo.flat(2, 3), S, Subspace.full(3)) == 0

    def test_fiber_dimension(self):
        with pytest.raises(ValueError):
            averaged_form(zoo.flat(2, 3), Subspace.full(2), Subspace.full(2))


def test_sample_summary_fubini_study():
    s = sample_summary(zoo.fubini_study(3), k=2, samples=500, seed=1)
    assert s["H"]["min"] == pytest.approx(2.0) and s["H"]["max"] == pytest.approx(2.0)
    assert s["ric_k"]["min"] == pytest.approx(3.0) and s["s_k"]["max"] == pytest.approx(6.0)
    assert s["chern_scalar"] == pytest.approx(12.0)


def test_sample_summary_non_square():
    s = sample_summary(zoo.random_hermitian(2, 3, 0), samples=100)
    assert set(s) == {"direction_eigenvalues"}


def test_sampled_ricci_implies_scalar():
    # min Ric_k > 0 over shared samples forces S_k > 0 there, since S_k sums Ric_k over a frame
    R = zoo.shifted_positive(3, 0, 1.0)
    rng = np.random.default_rng(0)
    for _ in range(200):
        S = Subspace.random(3, 2, rng)
        ric = [ricci_k(R, S, S.frame[:, i]) for i in range(2)]
        if min(ric) > 0:
            assert scalar_k(R, S) > 0

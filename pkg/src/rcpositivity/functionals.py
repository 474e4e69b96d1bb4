"""Pointwise curvature functionals: H, Ric, S, Ric_k, S_k and averaged forms.

Two contractions carry almost everything here. For a base projector ``P``
(``P = sum_m E_m E_m^H`` over a unitary frame of a subspace) the *fiber operator*
``fiber_operator(R, P)`` is the r x r matrix of ``u -> sum_m R_{E_m Ebar_m}(u)``,
so that ``u^H A u = sum_m R(E_m, Ebar_m, u, ubar)``. Symmetrically
``base_operator(R, Q)`` contracts a fiber projector and gives the n x n matrix
with ``X^H K X = sum_j R(X, Xbar, e_j, ebar_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import CurvatureTensor

ORTHONORMAL_TOL = 1e-10
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Subspace:
    """A point of the complex Grassmannian, held as an orthonormal column frame."""

    frame: np.ndarray

    def __post_init__(self):
        F = np.array(self.frame, dtype=complex)
        if F.ndim == 1:
            F = F[:, None]
        if F.ndim != 2 or F.shape[1] < 1 or F.shape[1] > F.shape[0]:
            raise ValueError(f"frame must be ambient_dim x k with 1 <= k <= ambient_dim, got {F.shape}")
        err = np.max(np.abs(F.conj().T @ F - np.eye(F.shape[1])))
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"frame columns are not orthonormal (error {err:.2e})")
        F.setflags(write=False)
        object.__setattr__(self, "frame", F)

    @classmethod
    def from_vectors(cls, vectors) -> Subspace:
        """Span of the given columns, orthonormalized by QR."""
        A = np.array(vectors, dtype=complex)
        if A.ndim == 1:
            A = A[:, None]
        q, rr = np.linalg.qr(A)
        if np.min(np.abs(np.diag(rr))) < 1e-12 * max(1.0, np.max(np.abs(rr))):
            raise ValueError("vectors are linearly dependent")
        return cls(q)

    @classmethod
    def random(cls, ambient_dim: int, k: int, rng: np.random.Generator) -> Subspace:
        return cls(random_frame(ambient_dim, k, rng))

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(np.eye(ambient_dim, dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def k(self) -> int:
        return self.frame.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def complement(self) -> Subspace | None:
        """Orthogonal complement, or ``None`` when the subspace is everything."""
        if self.k == self.ambient_dim:
            return None
        u, _, _ = np.linalg.svd(self.frame, full_matrices=True)
        return Subspace(u[:, self.k :])

    def contains(self, X, tol: float = MEMBERSHIP_TOL) -> bool:
        X = np.asarray(X, dtype=complex)
        resid = X - self.frame @ (self.frame.conj().T @ X)
        return bool(np.linalg.norm(resid) <= tol * np.linalg.norm(X))

    def rotated(self, U: np.ndarray) -> Subspace:
        """Same subspace, frame multiplied on the right by a k x k unitary."""
        return Subspace(self.frame @ U)


def random_frame(ambient_dim: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthonormal ``ambient_dim x k`` frame."""
    z = (rng.standard_normal((ambient_dim, k)) + 1j * rng.standard_normal((ambient_dim, k))) / np.sqrt(2)
    q, rr = np.linalg.qr(z)
    d = np.diag(rr)
    return q * (d / np.abs(d))


def random_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    return random_frame(k, k, rng)


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


@dataclass(frozen=True, eq=False)
class DirectionMatrix:
    """Hermitian fiber operator ``R_{XXbar}`` for one direction, or summed over a subspace.

    ``matrix`` is the operator in the unitary fiber frame, i.e.
    ``matrix[b, a] = R(X, Xbar, s_a, sbar_b)``; its eigenvalues are the
    ``lambda_i(x, X)`` and its eigenvectors are fiber vectors.
    """

    matrix: np.ndarray
    source: np.ndarray | Subspace

    def eigh(self):
        return np.linalg.eigh(self.matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _herm(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.conj().T)


def fiber_operator(R: CurvatureTensor | np.ndarray, P: np.ndarray) -> np.ndarray:
    """``A[b, a] = sum_ij R[i, j, a, b] P[i, j]`` for a Hermitian base matrix ``P``."""
    entries = R.entries if isinstance(R, CurvatureTensor) else R
    n, r = entries.shape[0], entries.shape[2]
    A = (P.reshape(-1) @ entries.reshape(n * n, r * r)).reshape(r, r).T
    return _herm(A)


def base_operator(R: CurvatureTensor | np.ndarray, Q: np.ndarray) -> np.ndarray:
    """``K[j, i] = sum_ab R[i, j, a, b] Q[a, b]`` for a Hermitian fiber matrix ``Q``."""
    entries = R.entries if isinstance(R, CurvatureTensor) else R
    n, r = entries.shape[0], entries.shape[2]
    K = (entries.reshape(n * n, r * r) @ Q.reshape(-1)).reshape(n, n).T
    return _herm(K)


def _vec(X, dim: int, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (dim,):
        raise ValueError(f"{name} must have shape ({dim},), got {X.shape}")
    return X


def _nonzero(X: np.ndarray, name: str = "X") -> float:
    norm = float(np.linalg.norm(X))
    if norm == 0.0:
        raise ValueError(f"{name} must be nonzero")
    return norm


def _square(R: CurvatureTensor):
    if R.r != R.n:
        raise ValueError(f"this functional needs the tangent bundle (r == n), got n={R.n}, r={R.r}")


def evaluate(R: CurvatureTensor, X, Y, u, v) -> complex:
    """``R(X, Ybar, u, vbar) = sum R[i,j,a,b] X^i conj(Y^j) u^a conj(v^b)``."""
    X, Y = _vec(X, R.n, "X"), _vec(Y, R.n, "Y")
    u, v = _vec(u, R.r, "u"), _vec(v, R.r, "v")
    return complex(np.einsum("ijab,i,j,a,b->", R.entries, X, Y.conj(), u, v.conj()))


def direction_matrix(R: CurvatureTensor, X) -> DirectionMatrix:
    X = _vec(X, R.n, "X")
    _nonzero(X)
    return DirectionMatrix(fiber_operator(R, np.outer(X, X.conj())), X)


def direction_matrix_sum(R: CurvatureTensor, sigma: Subspace) -> DirectionMatrix:
    if sigma.ambient_dim != R.n:
        raise ValueError("subspace does not live in the base tangent space")
    return DirectionMatrix(fiber_operator(R, sigma.projector), sigma)


def holo_sectional(R: CurvatureTensor, X) -> float:
    _square(R)
    X = _vec(X, R.n, "X")
    norm = _nonzero(X)
    return evaluate(R, X, X, X, X).real / norm**4


def chern_ricci(R: CurvatureTensor, X) -> float:
    _square(R)
    X = _vec(X, R.n, "X")
    _nonzero(X)
    return float(np.trace(fiber_operator(R, np.outer(X, X.conj()))).real)


def chern_scalar(R: CurvatureTensor) -> float:
    _square(R)
    return float(np.einsum("iijj->", R.entries).real)


def ricci_form(R: CurvatureTensor, sigma: Subspace) -> np.ndarray:
    """k x k Hermitian matrix ``N`` with ``Ric_k(Sigma)(F y, conj(F y)) = y^H N y``."""
    _square(R)
    F = sigma.frame
    return _herm(F.conj().T @ base_operator(R, sigma.projector) @ F)


def ricci_k(R: CurvatureTensor, sigma: Subspace, X) -> float:
    _square(R)
    X = _vec(X, R.n, "X")
    _nonzero(X)
    if not sigma.contains(X):
        raise ValueError("X does not lie in the subspace")
    A = fiber_operator(R, np.outer(X, X.conj()))
    return float(np.trace(sigma.frame.conj().T @ A @ sigma.frame).real)


def scalar_k(R: CurvatureTensor, sigma: Subspace) -> float:
    _square(R)
    P = sigma.projector
    return float(np.trace(P @ fiber_operator(R, P)).real)


def rc_form(R: CurvatureTensor, sigma: Subspace, u) -> float:
    """``R(Sigma; u, ubar) = sum_i R(E_i, Ebar_i, u, ubar)``."""
    u = _vec(u, R.r, "u")
    A = direction_matrix_sum(R, sigma).matrix
    return float((u.conj() @ A @ u).real)


def averaged_form(R: CurvatureTensor, sigma: Subspace, fiber: Subspace) -> float:
    """``R(Sigma; sigma) = sum_ij R(E_i, Ebar_i, e_j, ebar_j)``."""
    if fiber.ambient_dim != R.r:
        raise ValueError("fiber subspace does not live in the fiber")
    A = direction_matrix_sum(R, sigma).matrix
    e = fiber.frame
    return float(np.trace(e.conj().T @ A @ e).real)


def _minmax(values: np.ndarray) -> dict:
    return {"min": float(values.min()), "max": float(values.max())}


def sample_summary(R: CurvatureTensor, k: int = 1, samples: int = 1000, seed: int = 0) -> dict:
    """Ranges of the pointwise functionals over random unit vectors and random k-planes.

    Direction eigenvalues are always reported; ``H``, Chern-Ricci, ``Ric_k``
    (minimized over unit X in each sampled plane) and ``S_k`` need ``r == n``.
    """
    if not 1 <= k <= R.n:
        raise ValueError(f"k must be in [1, {R.n}], got {k}")
    rng = np.random.default_rng(seed)
    E = R.entries
    z = rng.standard_normal((samples, R.n)) + 1j * rng.standard_normal((samples, R.n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    A = np.einsum("ijab,Ni,Nj->Nba", E, z, z.conj())
    A = 0.5 * (A + A.conj().transpose(0, 2, 1))
    w = np.linalg.eigvalsh(A)
    out = {"direction_eigenvalues": {"min": float(w[:, 0].min()), "max": float(w[:, -1].max())}}
    if R.r != R.n:
        return out
    frames = np.linalg.qr(rng.standard_normal((samples, R.n, k)) + 1j * rng.standard_normal((samples, R.n, k)))[0]
    P = frames @ frames.conj().transpose(0, 2, 1)
    AP = np.einsum("ijab,Nij->Nba", E, P)
    KP = np.einsum("ijab,Nab->Nji", E, P)
    N = frames.conj().transpose(0, 2, 1) @ KP @ frames
    out.update(
        {
            "H": _minmax(np.einsum("Na,Nab,Nb->N", z.conj(), A, z).real),
            "chern_ricci": _minmax(np.trace(A, axis1=1, axis2=2).real),
            "chern_scalar": chern_scalar(R),
            "ric_k": _minmax(np.linalg.eigvalsh(0.5 * (N + N.conj().transpose(0, 2, 1)))[:, 0]),
            "s_k": _minmax(np.einsum("Nij,Nji->N", P, AP).real),
        }
    )
    return out

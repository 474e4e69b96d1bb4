"""Pointwise Chern curvature tensors in unitary frames.

A tensor is stored densely as ``entries[i, j, a, b] = R(e_i, conj(e_j), s_a, conj(s_b))``
where ``e`` is a unitary frame of the base tangent space (dimension ``n``) and
``s`` a unitary frame of the bundle fiber (rank ``r``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_REL_TOL = 1e-9


class MetricNotPositiveError(ValueError):
    """A Gram matrix handed to :func:`normalize_to_unitary` is not positive definite."""


class SymmetryError(ValueError):
    """A tensor fails a symmetry it is declared to satisfy."""


class SymmetryCheck(NamedTuple):
    ok: bool
    violation: float


def _default_tol(entries: np.ndarray) -> float:
    scale = float(np.max(np.abs(entries))) if entries.size else 0.0
    return DEFAULT_REL_TOL * max(scale, 1.0)


def hermitian_violation(entries: np.ndarray) -> float:
    """Max of ``|R[i,j,a,b] - conj(R[j,i,b,a])|``."""
    swapped = np.conj(entries.transpose(1, 0, 3, 2))
    return float(np.max(np.abs(entries - swapped))) if entries.size else 0.0


def ckl_violation(entries: np.ndarray) -> tuple[float, float]:
    """Violations of ``R[i,j,k,l] = R[k,j,i,l]`` and of its consequence ``R[i,j,k,l] = R[i,l,k,j]``."""
    first = np.max(np.abs(entries - entries.transpose(2, 1, 0, 3)))
    second = np.max(np.abs(entries - entries.transpose(0, 3, 2, 1)))
    return float(first), float(second)


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """Chern curvature components ``R_{i jbar a bbar}`` at a point, in unitary frames.

    Parameters
    ----------
    entries : array_like, shape (n, n, r, r)
        Complex components. Copied and made read-only.
    ckl : bool
        Declares the Kähler-like symmetry ``R(X,Ybar,Z,Wbar) = R(Z,Ybar,X,Wbar)``;
        only allowed when ``r == n``.
    tol : float, optional
        Absolute tolerance for the symmetry validation. Defaults to ``1e-9``
        times the largest entry magnitude (at least ``1e-9``).
    """

    entries: np.ndarray
    ckl: bool = False
    tol: float | None = None

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
            raise ValueError(f"entries must have shape (n, n, r, r), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[2] < 1:
            raise ValueError("n and r must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        tol = _default_tol(arr) if self.tol is None else float(self.tol)
        herm = hermitian_violation(arr)
        if herm > tol:
            raise SymmetryError(f"tensor is not Hermitian (violation {herm:.3e} > {tol:.3e})")
        if self.ckl:
            if arr.shape[0] != arr.shape[2]:
                raise ValueError("ckl tensors need r == n")
            viol = max(ckl_violation(arr))
            if viol > tol:
                raise SymmetryError(f"tensor is not CKL (violation {viol:.3e} > {tol:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "tol", tol)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def r(self) -> int:
        return self.entries.shape[2]

    def scaled(self, t: float) -> CurvatureTensor:
        return CurvatureTensor(t * self.entries, ckl=self.ckl)

    def __neg__(self) -> CurvatureTensor:
        return CurvatureTensor(-self.entries, ckl=self.ckl)

    def __add__(self, other: CurvatureTensor) -> CurvatureTensor:
        return CurvatureTensor(self.entries + other.entries, ckl=self.ckl and other.ckl)

    def __repr__(self) -> str:
        return f"CurvatureTensor(n={self.n}, r={self.r}, ckl={self.ckl})"


@dataclass(frozen=True)
class FrameData:
    """Curvature components in an arbitrary (non-unitary) frame together with both Gram matrices."""

    gram_base: np.ndarray
    gram_fiber: np.ndarray
    raw_entries: np.ndarray


def _inverse_sqrt(gram: np.ndarray, name: str) -> np.ndarray:
    gram = np.asarray(gram, dtype=complex)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
        raise ValueError(f"{name} must be square")
    if np.max(np.abs(gram - gram.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(gram))):
        raise MetricNotPositiveError(f"{name} is not Hermitian")
    w, v = np.linalg.eigh(gram)
    if w[0] <= 0:
        raise MetricNotPositiveError(f"{name} has non-positive eigenvalue {w[0]:.3e}")
    return (v / np.sqrt(w)) @ v.conj().T


def normalize_to_unitary(data: FrameData, ckl: bool = False) -> CurvatureTensor:
    """Rewrite frame data in unitary frames via the Hermitian inverse square root.

    With ``gram[i, j] = <s_i, s_j>`` the new frame is ``s~_a = sum_i W[i, a] s_i``
    where ``W = conj(gram)^(-1/2)``, and the components transform tensorially in
    each (linear, conjugate-linear) slot pair.
    """
    raw = np.asarray(data.raw_entries, dtype=complex)
    wb = _inverse_sqrt(np.conj(data.gram_base), "gram_base")
    wf = _inverse_sqrt(np.conj(data.gram_fiber), "gram_fiber")
    n, r = wb.shape[0], wf.shape[0]
    if raw.shape != (n, n, r, r):
        raise ValueError(f"raw_entries shape {raw.shape} does not match Grams ({n}, {r})")
    out = np.einsum("ijab,ip,jq,ac,bd->pqcd", raw, wb, wb.conj(), wf, wf.conj())
    return CurvatureTensor(out, ckl=ckl)


def check_hermitian(R: CurvatureTensor | np.ndarray, tol: float | None = None) -> SymmetryCheck:
    entries = R.entries if isinstance(R, CurvatureTensor) else np.asarray(R, dtype=complex)
    tol = _default_tol(entries) if tol is None else tol
    viol = hermitian_violation(entries)
    return SymmetryCheck(viol <= tol, viol)


def check_ckl(R: CurvatureTensor | np.ndarray, tol: float | None = None) -> SymmetryCheck:
    """Check the Kähler-like symmetry and its conjugate consequence; needs ``r == n``."""
    entries = R.entries if isinstance(R, CurvatureTensor) else np.asarray(R, dtype=complex)
    if entries.shape[0] != entries.shape[2]:
        raise ValueError(f"CKL check needs r == n, got n={entries.shape[0]}, r={entries.shape[2]}")
    tol = _default_tol(entries) if tol is None else tol
    viol = max(ckl_violation(entries))
    return SymmetryCheck(viol <= tol, viol)


def hermitian_part(T: np.ndarray) -> np.ndarray:
    """Average of ``T`` and its conjugate-swap ``conj(T[j,i,b,a])``."""
    T = np.asarray(T, dtype=complex)
    return 0.5 * (T + np.conj(T.transpose(1, 0, 3, 2)))


def project_to_ckl(T: np.ndarray) -> CurvatureTensor:
    """Orthogonal projection onto Hermitian tensors with the Kähler-like symmetries.

    Averages ``T`` over the order-8 group generated by swapping the two
    holomorphic slots, swapping the two antiholomorphic slots and the
    Hermitian conjugate-swap.
    """
    T = np.asarray(T, dtype=complex)
    if T.ndim != 4 or len(set(T.shape)) != 1:
        raise ValueError(f"CKL projection needs shape (n, n, n, n), got {T.shape}")
    S = 0.25 * (T + T.transpose(2, 1, 0, 3) + T.transpose(0, 3, 2, 1) + T.transpose(2, 3, 0, 1))
    return CurvatureTensor(hermitian_part(S), ckl=True)


def dual_tensor(R: CurvatureTensor) -> CurvatureTensor:
    """Curvature of the dual bundle: ``R*[i,j,a,b] = -R[i,j,b,a]``."""
    # the dual of a tangent-bundle tensor is no longer CKL in general
    return CurvatureTensor(-R.entries.transpose(0, 1, 3, 2))


def change_frame(R: CurvatureTensor, U: np.ndarray, V: np.ndarray | None = None) -> CurvatureTensor:
    """Components of ``R`` in the unitary frames given by the columns of ``U`` (base) and ``V`` (fiber)."""
    if V is None:
        V = U
    out = np.einsum("ijab,ip,jq,ac,bd->pqcd", R.entries, U, U.conj(), V, V.conj())
    return CurvatureTensor(hermitian_part(out), ckl=R.ckl)

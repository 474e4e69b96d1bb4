"""Vanishing-theorem constants, the vanishing region and the induced curvature action on tensor powers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .functionals import Subspace, fiber_operator
from .grassmann import DEFAULT_RESTARTS, KyFanObjective, certify, optimize_subspace
from .spherical import sphere_volume
from .tensor import CurvatureTensor

MAX_TENSOR_SIZE = 100_000
SAMPLE_FLOOR = 1000
REGION_REL_TOL = 1e-9


class NotUniformlyPositiveError(ValueError):
    """The bundle is not certified uniformly RC k-positive, so ``C1`` is undefined."""


@dataclass(frozen=True)
class VanishingConstants:
    k: int
    C: float
    lambda_max: float
    lambda_min: float
    C1: float
    C2: float
    mu_max: float | None = None
    mu_min: float | None = None
    witnesses: tuple[Subspace, ...] = ()

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "C": self.C,
            "lambda_max": self.lambda_max,
            "lambda_min": self.lambda_min,
            "mu_max": self.mu_max,
            "mu_min": self.mu_min,
            "C1": self.C1,
            "C2": self.C2,
        }


def _extreme_eigenvalue(R: CurvatureTensor, largest: bool, restarts: int, seed: int) -> float:
    """Max (or min) over unit base vectors X of the extreme eigenvalue of ``R_{XXbar}``.

    Sphere optimization with restarts, guarded by a random-sample floor because
    the extreme eigenvalue is only continuous in X.
    """
    objective = KyFanObjective(R, "base", 1, largest=largest)
    res = optimize_subspace(objective, 1, maximize=largest, restarts=restarts, seed=seed)
    rng = np.random.default_rng([seed, 1])
    z = rng.standard_normal((SAMPLE_FLOOR, R.n)) + 1j * rng.standard_normal((SAMPLE_FLOOR, R.n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    A = np.einsum("ijab,Ni,Nj->Nba", R.entries, z, z.conj())
    w = np.linalg.eigvalsh(0.5 * (A + A.conj().transpose(0, 2, 1)))
    if largest:
        return max(res.value, float(w[:, -1].max()))
    return min(res.value, float(w[:, 0].min()))


def compute_constants(
    E_points: CurvatureTensor | Sequence[CurvatureTensor],
    F_points: CurvatureTensor | Sequence[CurvatureTensor] | None = None,
    k: int = 1,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = 1e-10,
) -> VanishingConstants:
    """Constants ``C, lambda_max/min, mu_max/min, C1, C2`` over the sampled points.

    ``C`` is the uniform RC (k,1) certificate value minimized over points. With
    no ``F`` the auxiliary bundle is treated as trivial, so ``C2 = 1``.
    """
    E_points = [E_points] if isinstance(E_points, CurvatureTensor) else list(E_points)
    if F_points is not None:
        F_points = [F_points] if isinstance(F_points, CurvatureTensor) else list(F_points)
        if len(F_points) != len(E_points):
            raise ValueError("E and F point lists must be aligned")
    cert = certify(E_points, "uniform-rc", k, 1, restarts=restarts, seed=seed, tol=tol)
    if not cert.positive:
        raise NotUniformlyPositiveError(f"uniform RC {k}-positivity fails: certified value {cert.value:.6g} <= 0")
    C = cert.value
    lam_max = max(_extreme_eigenvalue(E, True, restarts, seed) for E in E_points)
    lam_min = min(_extreme_eigenvalue(E, False, restarts, seed) for E in E_points)
    mu_max = mu_min = None
    C2 = 1.0
    if F_points is not None:
        mu_max = max(_extreme_eigenvalue(F, True, restarts, seed) for F in F_points)
        mu_min = min(_extreme_eigenvalue(F, False, restarts, seed) for F in F_points)
        if mu_max > 0:
            C2 = k * mu_max / C
    return VanishingConstants(
        k=k,
        C=C,
        lambda_max=lam_max,
        lambda_min=lam_min,
        C1=k * lam_max / C,
        C2=C2,
        mu_max=mu_max,
        mu_min=mu_min,
        witnesses=tuple(w.outer for w in cert.witnesses),
    )


def vanishing_region(consts: VanishingConstants, p: int, q: int, m: int) -> bool:
    """Whether ``q > C1 p + C2 m``, where the tensor sections are forced to vanish.

    Points within a relative ``1e-9`` of the boundary count as outside, so
    rounding in the constants never claims a boundary point.
    """
    bound = consts.C1 * p + consts.C2 * m
    return q > bound + REGION_REL_TOL * abs(bound)


def region_table(consts: VanishingConstants, max_p: int = 3, max_q: int = 6, max_m: int = 1) -> list[dict]:
    return [
        {"p": p, "q": q, "m": m, "vanishes": vanishing_region(consts, p, q, m)}
        for m in range(max_m + 1)
        for p in range(max_p + 1)
        for q in range(max_q + 1)
    ]


def induced_action_spectrum(lambdas, mus, p: int, q: int, m: int) -> np.ndarray:
    """Eigenvalues of ``R_{XXbar}`` on ``E^p (x) (E*)^q (x) F^m`` from those on ``E`` and ``F``.

    Entry order follows the multi-index ``(alpha_1..alpha_p, beta_1..beta_q,
    gamma_1..gamma_m)`` in row-major order; each value is
    ``sum lambda_alpha - sum lambda_beta + sum mu_gamma``.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    mus = np.asarray(mus if mus is not None else [], dtype=float)
    if (p + q) > 0 and lambdas.size == 0:
        raise ValueError("empty lambda list with p + q > 0")
    if m > 0 and mus.size == 0:
        raise ValueError("empty mu list with m > 0")
    size = lambdas.size ** (p + q) * mus.size**m
    if size > MAX_TENSOR_SIZE:
        raise ValueError(f"tensor power has {size} components, above the {MAX_TENSOR_SIZE} limit")
    out = np.zeros(())
    for vals in [lambdas] * p + [-lambdas] * q + [mus] * m:
        out = np.add.outer(out, vals)
    return out.reshape(-1)


def _apply_slot(M: np.ndarray, T: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(M, T, axes=([1], [axis])), 0, axis)


def induced_action(
    A_E: np.ndarray, A_F: np.ndarray | None, T: np.ndarray, p: int, q: int, m: int
) -> np.ndarray:
    """Apply the derivation induced by fiber operators ``A_E``, ``A_F`` to a coefficient array.

    ``T`` has ``p`` E-axes, then ``q`` dual axes (coefficients in the dual
    unitary basis, where the operator acts as ``-A_E^T``), then ``m`` F-axes.
    """
    out = np.zeros_like(T)
    for ax in range(p):
        out += _apply_slot(A_E, T, ax)
    for ax in range(p, p + q):
        out -= _apply_slot(A_E.T, T, ax)
    for ax in range(p + q, p + q + m):
        out += _apply_slot(A_F, T, ax)
    return out


def random_coefficients(r1: int, r2: int, p: int, q: int, m: int, rng: np.random.Generator) -> np.ndarray:
    shape = (r1,) * (p + q) + (r2,) * m
    if math.prod(shape) > MAX_TENSOR_SIZE:
        raise ValueError("tensor power too large")
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@dataclass(frozen=True)
class EstimateReport:
    lhs: float
    rhs: float
    holds: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def verify_estimate_bound(
    R_E: CurvatureTensor,
    R_F: CurvatureTensor | None,
    sigma: Subspace,
    T: np.ndarray,
    p: int,
    q: int,
    m: int,
    consts: VanishingConstants,
) -> EstimateReport:
    """Compare the sphere integral of ``<R_{XXbar} T, T>`` over ``sigma`` with its upper bound.

    The left side is exact: the integrand is Hermitian-quadratic in X, so its
    integral is ``(V/k) sum_i <R_{E_i Ebar_i} T, T>``. The right side is
    ``[lambda_max p - (C/k) q + mu_max m] V |T|^2``.
    """
    T = np.asarray(T, dtype=complex)
    r1 = R_E.r
    r2 = R_F.r if R_F is not None else 0
    if T.shape != (r1,) * (p + q) + (r2,) * m:
        raise ValueError(f"coefficient array shape {T.shape} does not match (p, q, m) = ({p}, {q}, {m})")
    if m > 0 and (R_F is None or consts.mu_max is None):
        raise ValueError("m > 0 needs an F tensor and mu_max")
    if R_F is not None and R_F.n != R_E.n:
        raise ValueError("E and F must live over the same base")
    k = sigma.k
    vol = sphere_volume(k)
    total = 0.0
    for i in range(k):
        X = sigma.frame[:, i]
        P = np.outer(X, X.conj())
        A_F = fiber_operator(R_F, P) if R_F is not None else None
        total += np.vdot(T, induced_action(fiber_operator(R_E, P), A_F, T, p, q, m)).real
    lhs = vol / k * total
    mu = consts.mu_max if m > 0 else 0.0
    norm_sq = float(np.vdot(T, T).real)
    rhs = (consts.lambda_max * p - consts.C / k * q + mu * m) * vol * norm_sq
    return EstimateReport(float(lhs), float(rhs), bool(lhs <= rhs + 1e-9 * abs(rhs)))


def induced_operator_matrix(A_E: np.ndarray, A_F: np.ndarray | None, p: int, q: int, m: int) -> np.ndarray:
    """Dense matrix of :func:`induced_action` (small powers only; used to cross-check spectra)."""
    r1 = A_E.shape[0]
    r2 = A_F.shape[0] if A_F is not None else 0
    shape = (r1,) * (p + q) + (r2,) * m
    size = math.prod(shape)
    cols = []
    for idx in itertools.product(*[range(s) for s in shape]):
        T = np.zeros(shape, dtype=complex)
        T[idx] = 1.0
        cols.append(induced_action(A_E, A_F, T, p, q, m).reshape(-1))
    return np.array(cols).T.reshape(size, size)

"""S_k-extremal subspaces and numerical checks of the critical-point identities they satisfy.

At a subspace minimizing (maximizing) ``S_k``, for unit ``Y`` in it and unit
``Z`` orthogonal to it:

* the sphere integrals of ``R(X, Xbar, Y, Zbar)`` and ``R(X, Xbar, Z, Ybar)``
  over unit ``X`` in the subspace vanish;
* the sphere integral of ``R(X, Xbar, Z, Zbar)`` is at least (at most)
  ``V S_k / (k (k+1))``.

Both integrands are Hermitian-quadratic in X, so the integrals are computed
exactly as ``(V/k) sum_i R(E_i, Ebar_i, ., .)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functionals import Subspace, fiber_operator, random_unit_vector, rc_form
from .grassmann import (
    DEFAULT_RESTARTS,
    OptimizationResult,
    RicciMinObjective,
    ScalarKObjective,
    fd_gradient,
    optimize_subspace,
)
from .spherical import sphere_volume
from .tensor import CurvatureTensor

D_SAMPLES = 1000


class HypothesisViolatedError(ValueError):
    """Ric_k has no definite sign on the sampled subspaces, so the chain has no hypothesis."""


def _require_ckl(R: CurvatureTensor):
    if not R.ckl:
        raise ValueError("this check needs a CKL tensor")


def find_extremal_sk(
    R: CurvatureTensor,
    k: int,
    mode: str = "min",
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = 1e-10,
) -> OptimizationResult:
    _require_ckl(R)
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    return optimize_subspace(ScalarKObjective(R), k, maximize=(mode == "max"), restarts=restarts, seed=seed, tol=tol)


def sk_gradient_norm(R: CurvatureTensor, sigma: Subspace) -> float:
    """Norm of the finite-difference Riemannian gradient of ``S_k`` at ``sigma``."""
    F = np.array(sigma.frame)
    G = fd_gradient(ScalarKObjective(R), F)
    return float(np.linalg.norm(G - F @ (F.conj().T @ G)))


@dataclass(frozen=True)
class NZCheck:
    nz1_residual: float
    nz2_margin: float
    vacuous: bool


def verify_nz_identities(
    R: CurvatureTensor, sigma_star: Subspace, trials: int = 100, seed: int = 0, mode: str = "min"
) -> NZCheck:
    """Max first-identity residual and min second-inequality slack over random ``(Y, Z)``.

    With ``mode="max"`` the inequality is reversed, and the reported margin
    is still positive when it holds.
    """
    _require_ckl(R)
    comp = sigma_star.complement()
    if comp is None:
        return NZCheck(0.0, 0.0, True)
    k = sigma_star.k
    vol = sphere_volume(k)
    K = fiber_operator(R, sigma_star.projector)  # Z^H K Y = sum_i R(E_i, Ebar_i, Y, Zbar)
    sk = float(np.trace(sigma_star.projector @ K).real)
    rng = np.random.default_rng(seed)
    sign = 1.0 if mode == "min" else -1.0
    nz1, nz2 = 0.0, np.inf
    for _ in range(trials):
        Y = sigma_star.frame @ random_unit_vector(k, rng)
        Z = comp.frame @ random_unit_vector(comp.k, rng)
        yz = vol / k * (Z.conj() @ K @ Y)
        zy = vol / k * (Y.conj() @ K @ Z)
        nz1 = max(nz1, abs(yz), abs(zy))
        lhs = vol / k * (Z.conj() @ K @ Z).real
        rhs = vol / (k * (k + 1)) * sk * float(np.vdot(Z, Z).real)
        nz2 = min(nz2, sign * (lhs - rhs))
    return NZCheck(float(nz1), float(nz2), False)


def _ricci_extreme(R: CurvatureTensor, k: int, restarts: int, seed: int) -> float:
    """Min over (Sigma, unit X in Sigma) of Ric_k: optimized, with a random-sample floor."""
    res = optimize_subspace(RicciMinObjective(R), k, maximize=False, restarts=restarts, seed=seed)
    rng = np.random.default_rng([seed, 2])
    objective = RicciMinObjective(R)
    best = res.value
    for _ in range(D_SAMPLES):
        F = Subspace.random(R.n, k, rng).frame
        best = min(best, objective.value(F))
    return best


@dataclass(frozen=True)
class ExtremalReport:
    sigma_star: Subspace
    s_k_value: float
    nz1_residual: float
    nz2_margin: float
    chain_margin: float
    D: float
    mode: str
    converged: bool
    gradient_norm: float
    nz_vacuous: bool

    def to_dict(self) -> dict:
        from .io import frame_to_json

        return {
            "sigma_star": frame_to_json(self.sigma_star.frame),
            "s_k_value": self.s_k_value,
            "nz1_residual": self.nz1_residual,
            "nz2_margin": self.nz2_margin,
            "nz_vacuous": self.nz_vacuous,
            "chain_margin": self.chain_margin,
            "D": self.D,
            "D_note": "sampled/optimized surrogate; an upper bound on the true minimum",
            "mode": self.mode,
            "converged": self.converged,
            "gradient_norm": self.gradient_norm,
        }


def verify_uniform_from_rick(
    R: CurvatureTensor,
    k: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    trials: int = 1000,
    tol: float = 1e-10,
) -> ExtremalReport:
    """Check that an S_k-extremal subspace makes the tangent bundle uniformly RC k-positive.

    With ``D`` the minimum of ``Ric_k`` over unit vectors of k-planes, every
    unit X must satisfy ``R(Sigma*; X, Xbar) >= k D / (k+1)``. When ``Ric_k``
    is negative the same check runs on ``-R`` (maximizing subspace, reversed
    inequalities) and ``mode`` is ``"negative"``; ``D`` and the values are
    reported for ``-R`` in that case.
    """
    _require_ckl(R)
    D = _ricci_extreme(R, k, restarts, seed)
    mode = "positive"
    if D <= 0:
        neg = -R
        D_neg = _ricci_extreme(neg, k, restarts, seed)
        if D_neg <= 0:
            raise HypothesisViolatedError(f"Ric_{k} changes sign: min {D:.6g}, max {-D_neg:.6g}")
        R, D, mode = neg, D_neg, "negative"
    res = find_extremal_sk(R, k, "min", restarts, seed, tol)
    sigma = res.subspace
    nz = verify_nz_identities(R, sigma, trials=min(trials, 100), seed=seed)
    rng = np.random.default_rng([seed, 3])
    bound = k * D / (k + 1)
    margin = np.inf
    for _ in range(trials):
        X = random_unit_vector(R.n, rng)
        margin = min(margin, rc_form(R, sigma, X) - bound)
    return ExtremalReport(
        sigma_star=sigma,
        s_k_value=res.value,
        nz1_residual=nz.nz1_residual,
        nz2_margin=nz.nz2_margin,
        chain_margin=float(margin),
        D=D,
        mode=mode,
        converged=res.converged,
        gradient_norm=sk_gradient_norm(R, sigma),
        nz_vacuous=nz.vacuous,
    )

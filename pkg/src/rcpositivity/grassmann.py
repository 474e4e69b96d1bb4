"""Optimization over complex Grassmannians and positivity certificates.

Every positivity notion reduces to an outer search over one Grassmannian with
an exact spectral inner step, because ``R(Sigma; sigma) = tr(P A(Q))`` is
bilinear in the two projectors. Ky Fan then turns an inner optimum over
``l``-planes into a sum of the ``l`` extreme eigenvalues.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from .functionals import DirectionMatrix, Subspace, base_operator, fiber_operator, random_frame
from .tensor import CurvatureTensor

log = logging.getLogger(__name__)

KINDS = ("uniform-rc", "rc", "bc", "uniform-bc", "griffiths")
GAP_TOL = 1e-8
FD_STEP = 1e-5
MAX_ITER = 500
STALL = 5
MU_LEVELS = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)
REFINE = 3
COARSE_TOL = 1e-6
EPS = np.finfo(float).eps
DEFAULT_RESTARTS = 16
DEFAULT_RESOLUTION = 20_000


# --------------------------------------------------------------------------- inner step


def ky_fan(A: np.ndarray, count: int, largest: bool = False):
    """Sum of the ``count`` smallest (or largest) eigenvalues of Hermitian ``A``.

    Returns ``(value, vectors, gap)`` where ``vectors`` spans the optimal
    ``count``-plane and ``gap`` separates the selected eigenvalues from the rest
    (``inf`` when every eigenvalue is selected).
    """
    dim = A.shape[0]
    if not 1 <= count <= dim:
        raise ValueError(f"count must be in [1, {dim}], got {count}")
    w, v = np.linalg.eigh(A)
    if largest:
        w, v = w[::-1], v[:, ::-1]
    gap = np.inf if count == dim else abs(w[count] - w[count - 1])
    return float(np.sum(w[:count])), v[:, :count], gap


def inner_min_over_fibers(A: DirectionMatrix | np.ndarray, l: int) -> tuple[float, Subspace]:
    """Minimum of ``sum_j e_j^H A e_j`` over ``l``-planes of the fiber (Ky Fan)."""
    M = A.matrix if isinstance(A, DirectionMatrix) else np.asarray(A, dtype=complex)
    value, vecs, _ = ky_fan(M, l)
    return value, Subspace(vecs)


def inner_max_over_fibers(A: DirectionMatrix | np.ndarray, l: int) -> tuple[float, Subspace]:
    M = A.matrix if isinstance(A, DirectionMatrix) else np.asarray(A, dtype=complex)
    value, vecs, _ = ky_fan(M, l, largest=True)
    return value, Subspace(vecs)


# --------------------------------------------------------------------------- objectives


class Objective:
    """A function of a Grassmannian point given by an orthonormal frame ``F``.

    ``gradient`` returns the Euclidean gradient with respect to ``F`` under the
    real inner product ``Re tr(G^H dF)``, or ``None`` where the function is not
    differentiable (the optimizer then falls back to finite differences).
    Smooth functions of the projector alone may also define
    ``value_and_pgrad(P) -> (value, B)`` with ``df = tr(B dP)``, which enables
    the quasi-Newton chart solver.
    """

    ambient_dim: int
    nonsmooth = False

    def value(self, F: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, F: np.ndarray) -> np.ndarray | None:
        return None


class KyFanObjective(Objective):
    """``P -> sum of count extreme eigenvalues of op(P)`` for the base or the fiber side.

    With ``side="base"`` the point is a base subspace and the inner matrix is
    the fiber operator; with ``side="fiber"`` roles swap.
    """

    nonsmooth = True

    def __init__(self, R: CurvatureTensor, side: str, count: int, largest: bool):
        if side not in ("base", "fiber"):
            raise ValueError(side)
        self.entries = R.entries
        self.side = side
        self.count = count
        self.largest = largest
        self.ambient_dim = R.n if side == "base" else R.r
        self._op, self._adjoint = (
            (fiber_operator, base_operator) if side == "base" else (base_operator, fiber_operator)
        )

    def inner(self, F: np.ndarray):
        return ky_fan(self._op(self.entries, F @ F.conj().T), self.count, self.largest)

    def value(self, F):
        return self.inner(F)[0]

    def gradient(self, F):
        _, vecs, gap = self.inner(F)
        if gap <= GAP_TOL:
            return None
        B = self._adjoint(self.entries, vecs @ vecs.conj().T)
        return 2.0 * B @ F

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.entries)) or 1.0

    def smoothed(self, mu: float) -> SmoothKyFanObjective:
        return SmoothKyFanObjective(self, mu)


def fermi_weights(w: np.ndarray, count: int, mu: float, largest: bool) -> np.ndarray:
    """Weights in (0, 1) summing to ``count`` that minimize (maximize) ``sum w_i l_i -+ mu H(w)``.

    ``w`` must be sorted ascending (as from ``eigh``). The chemical potential is
    found by safeguarded Newton started between the selected and rejected values.
    """
    if count == w.size:
        return np.ones_like(w)
    x = -w[::-1] if largest else w
    lo, hi = x[0] - 40.0 * mu, x[-1] + 40.0 * mu
    nu = 0.5 * (x[count - 1] + x[count])
    for _ in range(200):
        p = special.expit((nu - x) / mu)
        h = p.sum() - count
        if abs(h) <= 8 * EPS * w.size or hi - lo <= 4 * EPS * max(abs(lo), abs(hi)):
            break
        if h > 0:
            hi = nu
        else:
            lo = nu
        slope = (p * (1 - p)).sum() / mu
        nu = nu - h / slope if slope > 0 else 0.5 * (lo + hi)
        if not lo < nu < hi:
            nu = 0.5 * (lo + hi)
    return p[::-1] if largest else p


class SmoothKyFanObjective(Objective):
    """Entropy-smoothed Ky Fan sum: Fermi-Dirac weights in place of the hard eigenvalue selection.

    For the sum of the smallest eigenvalues the smoothed value lies in
    ``[f - mu d log 2, f]`` (mirrored for the largest), and it is analytic in
    the frame even where eigenvalues cross, so the gradient is always exact.
    """

    def __init__(self, base: KyFanObjective, mu: float):
        self.base = base
        self.mu = mu
        self.ambient_dim = base.ambient_dim

    def value_and_pgrad(self, P):
        b = self.base
        w, v = np.linalg.eigh(b._op(b.entries, P))
        p = fermi_weights(w, b.count, self.mu, b.largest)
        ent = -(special.xlogy(p, p) + special.xlogy(1 - p, 1 - p)).sum()
        sgn = 1.0 if b.largest else -1.0
        return float(p @ w + sgn * self.mu * ent), b._adjoint(b.entries, (v * p) @ v.conj().T)

    def value(self, F):
        return self.value_and_pgrad(F @ F.conj().T)[0]

    def gradient(self, F):
        return 2.0 * self.value_and_pgrad(F @ F.conj().T)[1] @ F


class ScalarKObjective(Objective):
    """``Sigma -> S_k(Sigma)`` on the base Grassmannian of a tangent-bundle tensor."""

    def __init__(self, R: CurvatureTensor):
        if R.r != R.n:
            raise ValueError("S_k needs r == n")
        self.entries = R.entries
        self.ambient_dim = R.n

    def value_and_pgrad(self, P):
        return (
            float(np.trace(P @ fiber_operator(self.entries, P)).real),
            base_operator(self.entries, P) + fiber_operator(self.entries, P),
        )

    def value(self, F):
        return self.value_and_pgrad(F @ F.conj().T)[0]

    def gradient(self, F):
        return 2.0 * self.value_and_pgrad(F @ F.conj().T)[1] @ F

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.entries)) or 1.0


class RicciMinObjective(Objective):
    """``Sigma -> min over unit X in Sigma of Ric_k(Sigma)(X, Xbar)``.

    With ``N = F^H K(P) F`` and ``y`` its bottom eigenvector, ``x = F y``, the
    gradient is ``2 K x y^H + 2 A(x x^H) F``; finite differences take over
    when the bottom eigenvalue of ``N`` is not simple.
    """

    nonsmooth = True

    def __init__(self, R: CurvatureTensor):
        if R.r != R.n:
            raise ValueError("Ric_k needs r == n")
        self.entries = R.entries
        self.ambient_dim = R.n

    def _parts(self, F):
        K = base_operator(self.entries, F @ F.conj().T)
        N = F.conj().T @ K @ F
        w, v = np.linalg.eigh(0.5 * (N + N.conj().T))
        gap = w[1] - w[0] if w.size > 1 else np.inf
        return float(w[0]), v[:, 0], K, gap

    def value(self, F):
        return self._parts(F)[0]

    def gradient(self, F):
        _, y, K, gap = self._parts(F)
        if gap <= GAP_TOL:
            return None
        x = F @ y
        return 2.0 * np.outer(K @ x, y.conj()) + 2.0 * fiber_operator(self.entries, np.outer(x, x.conj())) @ F


class CallableObjective(Objective):
    def __init__(self, fn: Callable[[np.ndarray], float], ambient_dim: int):
        self.fn = fn
        self.ambient_dim = ambient_dim

    def value(self, F):
        return float(self.fn(F))


# --------------------------------------------------------------------------- optimizer


def retract(F: np.ndarray) -> np.ndarray:
    """QR retraction onto orthonormal frames."""
    q, rr = np.linalg.qr(F)
    d = np.diag(rr)
    return q * (d / np.where(np.abs(d) > 0, np.abs(d), 1.0))


def fd_gradient(objective: Objective, F: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central finite-difference Euclidean gradient on the Stiefel chart."""
    G = np.zeros_like(F)
    for idx in np.ndindex(*F.shape):
        for unit in (1.0, 1j):
            D = np.zeros_like(F)
            D[idx] = unit
            d = (objective.value(retract(F + h * D)) - objective.value(retract(F - h * D))) / (2 * h)
            G[idx] += d * unit
    return G


def riemannian_gradient(objective: Objective, F: np.ndarray, with_flag: bool = False):
    """Tangent projection of the gradient; ``with_flag`` also reports whether it was analytic."""
    G = objective.gradient(F)
    exact = G is not None
    if not exact:
        G = fd_gradient(objective, F)
    G = G - F @ (F.conj().T @ G)
    return (G, exact) if with_flag else G


def polish(objective: Objective, F: np.ndarray, sign: float, tol: float, scale: float = 1e-3):
    """Nelder-Mead in a local chart around ``F``, for optima sitting on eigenvalue crossings.

    The chart is ``x -> retract(F + Q X(x))`` with ``Q`` an orthonormal basis
    of the complement and ``X`` the complex ``(n-k) x k`` matrix packed in ``x``.
    Returns ``(frame, sign * value)``; never worse than the start.
    """
    n, k = F.shape
    if k == n:
        return F, sign * objective.value(F)
    u, _, _ = np.linalg.svd(F, full_matrices=True)
    Q = u[:, k:]
    shape = (n - k, k)
    half = (n - k) * k

    def chart(x):
        X = (x[:half] + 1j * x[half:]).reshape(shape)
        return retract(F + Q @ X)

    def fun(x):
        return sign * objective.value(chart(x))

    dim = 2 * half
    simplex = np.vstack([np.zeros(dim), scale * np.eye(dim)])
    start = fun(np.zeros(dim))
    res = optimize.minimize(
        fun,
        np.zeros(dim),
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": 1e-12, "fatol": 0.1 * tol, "maxfev": 400 * dim, "adaptive": True},
    )
    if res.fun < start:
        return chart(res.x), float(res.fun)
    return F, start


def chart_descent(objective: Objective, F: np.ndarray, sign: float, tol: float, recenters: int = 4):
    """BFGS on ``sign * objective`` in graph charts of the Grassmannian.

    Around the frame ``F`` with complement basis ``Q`` the chart sends a
    complex ``(n-k) x k`` matrix ``X`` to the span of ``M = F + Q X``, with
    projector ``P = M (M^H M)^{-1} M^H``. If ``df = tr(B dP)`` then the chart
    gradient is ``2 Q^H (I - P) B M (M^H M)^{-1}``. The chart is re-centered
    at each result until the value moves by less than ``tol``.

    Returns ``(frame, sign * value, converged)``.
    """
    n, k = F.shape
    half = (n - k) * k
    phi = sign * objective.value_and_pgrad(F @ F.conj().T)[0]
    for _ in range(recenters):
        u, _, _ = np.linalg.svd(F, full_matrices=True)
        Q = u[:, k:]

        def frame(x, F=F, Q=Q):
            return F + Q @ (x[:half] + 1j * x[half:]).reshape(n - k, k)

        def fun(x):
            M = frame(x)
            Si = np.linalg.inv(M.conj().T @ M)
            P = M @ Si @ M.conj().T
            val, B = objective.value_and_pgrad(0.5 * (P + P.conj().T))
            GX = 2.0 * Q.conj().T @ (B - P @ B) @ M @ Si
            return sign * val, sign * np.concatenate([GX.real.ravel(), GX.imag.ravel()])

        res = optimize.minimize(fun, np.zeros(2 * half), jac=True, method="BFGS", options={"gtol": 1e-3 * tol})
        if res.fun >= phi:
            return F, phi, True
        F, change, phi = retract(frame(res.x)), phi - res.fun, float(res.fun)
        if change < tol:
            return F, phi, True
    return F, phi, False


@dataclass(frozen=True)
class OptimizationResult:
    subspace: Subspace
    value: float
    converged: bool
    restart_values: tuple[float, ...]
    iterations: int


def _descend(
    objective: Objective, F: np.ndarray, sign: float, tol: float, max_iter: int, step: float = 1.0, stall_any: bool = False
):
    """Minimize ``sign * objective`` from frame ``F``.

    Projected Polak-Ribiere conjugate gradient with Armijo backtracking; the
    previous direction is transported by tangent projection and the method
    falls back to steepest descent whenever that is not a descent direction.

    Converged means: objective change below ``tol`` with Riemannian gradient
    norm at most ``sqrt(tol)``, or no Armijo step along the negative gradient
    (stationary to working precision). Where the gradient had to come from
    finite differences (eigenvalue crossings), ``STALL`` consecutive tiny
    changes with a large gradient stop the run unconverged.
    """
    gtol = np.sqrt(tol)
    phi = sign * objective.value(F)
    G = sign * riemannian_gradient(objective, F)
    D = -G
    stalled = 0
    for it in range(1, max_iter + 1):
        gsq = float(np.vdot(G, G).real)
        if gsq < 1e-28:
            return F, phi, True, it
        slope = float(np.vdot(G, D).real)
        if slope >= -1e-12 * gsq:
            D, slope = -G, -gsq
        t = step
        while True:
            Fn = retract(F + t * D)
            phin = sign * objective.value(Fn)
            if phin <= phi + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-14:
                if slope == -gsq:
                    return F, phi, True, it
                D, slope, t = -G, -gsq, step
        change = phi - phin
        F, phi = Fn, phin
        step = 2.0 * t
        Gn, exact = riemannian_gradient(objective, F, with_flag=True)
        Gn = sign * Gn
        if change < tol:
            if np.sqrt(float(np.vdot(Gn, Gn).real)) <= gtol:
                return F, phi, True, it
            stalled += 0 if exact and not stall_any else 1
            if stalled >= STALL:
                return F, phi, False, it
        else:
            stalled = 0
        Gt = G - F @ (F.conj().T @ G)
        beta = max(0.0, float(np.vdot(Gn, Gn - Gt).real) / gsq)
        Dt = D - F @ (F.conj().T @ D)
        D = -Gn + beta * Dt
        G = Gn
    return F, phi, False, max_iter


def optimize_subspace(
    objective: Objective,
    k: int,
    maximize: bool = True,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
    initial: Sequence[np.ndarray] = (),
) -> OptimizationResult:
    """Best local optimum of ``objective`` over ``Gr_k(C^ambient_dim)`` from random restarts.

    Each restart runs projected conjugate gradient with a QR retraction and
    Armijo backtracking (see :func:`_descend` for the stopping rule). Ky Fan
    objectives are optimized through their entropy smoothing with the
    temperature lowered along ``MU_LEVELS`` (relative to the tensor norm), and
    every nonsmooth objective gets a final :func:`polish` on its exact value.
    Extra starting frames in ``initial`` run before the random restarts. Ties
    keep the first restart that reached the best value.
    """
    n = objective.ambient_dim
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if k == n:
        F = np.eye(n, dtype=complex)
        return OptimizationResult(Subspace(F), objective.value(F), True, (objective.value(F),), 0)
    sign = -1.0 if maximize else 1.0
    rng = np.random.default_rng(seed)
    starts = [retract(np.asarray(F0, dtype=complex)) for F0 in initial]
    starts += [random_frame(n, k, rng) for _ in range(restarts)]
    if hasattr(objective, "smoothed"):
        runs = _continuation(objective, starts, sign, tol)
    elif hasattr(objective, "value_and_pgrad"):
        scale = getattr(objective, "scale", 1.0)
        runs = [(*chart_descent(objective, F0, sign, tol * scale), 0) for F0 in starts]
    else:
        runs = [_descend(objective, F0, sign, tol, max_iter, stall_any=objective.nonsmooth) for F0 in starts]
    values = tuple(sign * phi for _, phi, _, _ in runs)
    log.debug("restart values: %s", values)
    F, phi, conv, iters = min(runs, key=lambda run: run[1])
    if objective.nonsmooth:
        for scale in (1e-3, 1e-6):
            F, phi = polish(objective, F, sign, tol, scale)
    return OptimizationResult(Subspace(retract(F)), sign * phi, conv, values, iters)


def _continuation(objective: KyFanObjective, starts, sign: float, tol: float):
    """Smoothed restarts at the coarsest temperature, then full continuation for the best few."""
    scale = objective.scale
    levels = [objective.smoothed(mu * scale) for mu in MU_LEVELS]
    coarse = [chart_descent(levels[0], F0, sign, COARSE_TOL * scale) for F0 in starts]
    order = sorted(range(len(starts)), key=lambda i: coarse[i][1])[:REFINE]
    runs = []
    for i, (F, _, conv) in enumerate(coarse):
        if i in order:
            for smooth in levels[1:]:
                F, _, conv = chart_descent(smooth, F, sign, tol * scale)
        runs.append((F, sign * objective.value(F), conv, 0))
    return runs


# --------------------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Witness:
    outer: Subspace
    inner: Subspace
    value: float
    converged: bool


@dataclass(frozen=True)
class PositivityCertificate:
    kind: str
    k: int
    l: int
    value: float
    positive: bool
    witnesses: tuple[Witness, ...]
    restarts: int
    converged: bool
    seed: int
    point_values: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict:
        from .io import frame_to_json

        return {
            "kind": self.kind,
            "k": self.k,
            "l": self.l,
            "value": self.value,
            "positive": self.positive,
            "point_values": list(self.point_values),
            "witnesses": [
                {
                    "outer": frame_to_json(w.outer.frame),
                    "inner": frame_to_json(w.inner.frame),
                    "value": w.value,
                    "converged": w.converged,
                }
                for w in self.witnesses
            ],
            "restarts": self.restarts,
            "converged": self.converged,
            "seed": self.seed,
        }


def kind_objective(R: CurvatureTensor, kind: str, k: int, l: int):
    """Outer objective, outer dimension and direction for a positivity kind.

    Returns ``(objective, outer_dim, maximize)``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if not 1 <= k <= R.n:
        raise ValueError(f"k must be in [1, {R.n}], got {k}")
    if not 1 <= l <= R.r:
        raise ValueError(f"l must be in [1, {R.r}], got {l}")
    if kind == "uniform-rc":  # max_Sigma min_sigma
        return KyFanObjective(R, "base", l, largest=False), k, True
    if kind == "griffiths":  # min_Sigma min_sigma
        return KyFanObjective(R, "base", l, largest=False), k, False
    if kind == "bc":  # min_Sigma max_sigma
        return KyFanObjective(R, "base", l, largest=True), k, False
    if kind == "rc":  # min_sigma max_Sigma
        return KyFanObjective(R, "fiber", k, largest=True), l, False
    # uniform-bc: max_sigma min_Sigma
    return KyFanObjective(R, "fiber", k, largest=False), l, True


def certify_point(
    R: CurvatureTensor, kind: str, k: int, l: int, restarts: int = DEFAULT_RESTARTS, seed: int = 0, tol: float = 1e-10
) -> Witness:
    objective, dim, maximize = kind_objective(R, kind, k, l)
    res = optimize_subspace(objective, dim, maximize=maximize, restarts=restarts, seed=seed, tol=tol)
    _, vecs, _ = objective.inner(res.subspace.frame)
    return Witness(res.subspace, Subspace(vecs), res.value, res.converged)


def certify(
    R: CurvatureTensor | Sequence[CurvatureTensor],
    kind: str,
    k: int,
    l: int = 1,
    points: Sequence[CurvatureTensor] | None = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = 1e-10,
) -> PositivityCertificate:
    """Certify a positivity notion by its min-max value, minimized over sample points.

    ``R`` may be a single tensor or a list of tensors; ``points`` adds further
    sampled points standing in for the minimum over the manifold.

    ========== ============================================
    kind       value at a point
    ========== ============================================
    uniform-rc ``max_Sigma min_sigma R(Sigma; sigma)``
    rc         ``min_sigma max_Sigma R(Sigma; sigma)``
    bc         ``min_Sigma max_sigma R(Sigma; sigma)``
    uniform-bc ``max_sigma min_Sigma R(Sigma; sigma)``
    griffiths  ``min_Sigma min_sigma R(Sigma; sigma)``
    ========== ============================================
    """
    pts = [R] if isinstance(R, CurvatureTensor) else list(R)
    pts += list(points or [])
    if not pts:
        raise ValueError("no points to certify")
    witnesses = tuple(certify_point(P, kind, k, l, restarts, seed, tol) for P in pts)
    values = tuple(w.value for w in witnesses)
    value = min(values)
    return PositivityCertificate(
        kind=kind,
        k=k,
        l=l,
        value=value,
        positive=value > 0,
        witnesses=witnesses,
        restarts=restarts,
        converged=all(w.converged for w in witnesses),
        seed=seed,
        point_values=values,
    )


def _batched_frames(dim: int, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((count, dim, k)) + 1j * rng.standard_normal((count, dim, k))) / np.sqrt(2)
    q, _ = np.linalg.qr(z)
    return q


def _batch_values(R: CurvatureTensor, objective: KyFanObjective, frames: np.ndarray) -> np.ndarray:
    P = frames @ frames.conj().transpose(0, 2, 1)
    if objective.side == "base":
        A = np.einsum("ijab,Nij->Nba", R.entries, P)
    else:
        A = np.einsum("ijab,Nab->Nji", R.entries, P)
    w = np.linalg.eigvalsh(0.5 * (A + A.conj().transpose(0, 2, 1)))
    if objective.largest:
        w = w[:, ::-1]
    return w[:, : objective.count].sum(axis=1)


def brute_force_certify(
    R: CurvatureTensor, kind: str, k: int, l: int = 1, resolution: int = DEFAULT_RESOLUTION, seed: int = 0
) -> float:
    """Value of a positivity kind with the outer search replaced by random sampling.

    Half of the ``resolution`` samples are Haar-random; the rest are random
    perturbations around the current best frames with shrinking radius. The
    inner optimum is exact and no gradient is used, so the result can only
    underestimate an outer maximum and overestimate an outer minimum.
    """
    objective, dim, maximize = kind_objective(R, kind, k, l)
    sign = -1.0 if maximize else 1.0
    rng = np.random.default_rng(seed)
    chunk = 4096
    n_global = max(1, resolution // 2)
    frames, vals = [], []
    done = 0
    while done < n_global:
        m = min(chunk, n_global - done)
        fr = _batched_frames(objective.ambient_dim, dim, m, rng)
        frames.append(fr)
        vals.append(sign * _batch_values(R, objective, fr))
        done += m
    frames, vals = np.concatenate(frames), np.concatenate(vals)
    keep = 8
    order = np.argsort(vals)[:keep]
    elite, elite_vals = frames[order], vals[order]
    remaining = resolution - n_global
    rounds = 12
    radius = 0.3
    for rnd in range(rounds):
        m = remaining // (rounds - rnd)
        remaining -= m
        if m <= 0:
            continue
        parents = elite[rng.integers(0, len(elite), m)]
        noise = rng.standard_normal(parents.shape) + 1j * rng.standard_normal(parents.shape)
        fr, _ = np.linalg.qr(parents + radius * noise)
        v = sign * _batch_values(R, objective, fr)
        pool = np.concatenate([elite, fr])
        pool_vals = np.concatenate([elite_vals, v])
        order = np.argsort(pool_vals)[:keep]
        elite, elite_vals = pool[order], pool_vals[order]
        radius *= 0.5
    return float(sign * elite_vals[0])

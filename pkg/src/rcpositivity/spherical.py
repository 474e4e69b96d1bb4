"""Spherical moments on the unit sphere of a k-dimensional complex subspace.

Exact values always come from the closed-form moment identities. The Monte
Carlo engine exists to cross-check them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .functionals import Subspace
from .tensor import CurvatureTensor

MC_BAND = 4.0
ROUNDING = 1e-12


@dataclass(frozen=True)
class SphericalEstimate:
    value: complex | float
    stderr: float
    samples: int
    seed: int

    def agrees_with(self, exact, band: float = MC_BAND, floor: float | None = None) -> bool:
        """``|value - exact| <= band * stderr + floor``.

        The default floor ``ROUNDING * max(|exact|, |value|)`` only matters when
        the integrand is (nearly) constant on the sphere, where the standard
        error falls below floating-point rounding.
        """
        if floor is None:
            floor = ROUNDING * max(abs(exact), abs(self.value))
        return bool(abs(self.value - exact) <= band * self.stderr + floor)


def sphere_volume(k: int) -> float:
    """Surface measure of the unit sphere of C^k, ``2 pi^k / (k-1)!``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return 2.0 * math.pi**k / math.factorial(k - 1)


def sample_sphere(k: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform unit vectors of C^k as rows (normalized complex normal draws)."""
    z = rng.standard_normal((samples, k)) + 1j * rng.standard_normal((samples, k))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def mc_sphere_average(
    f: Callable[[np.ndarray], np.ndarray],
    sigma: Subspace | int,
    samples: int,
    seed: int = 0,
) -> SphericalEstimate:
    """Monte Carlo estimate of the integral of ``f`` over the unit sphere of ``sigma``.

    ``f`` is vectorized: it receives an array of shape ``(samples, ambient_dim)``
    whose rows are unit vectors of ``sigma`` and returns ``samples`` values.
    An integer ``sigma`` means the coordinate space ``C^sigma``.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if isinstance(sigma, int):
        sigma = Subspace.full(sigma)
    k = sigma.k
    rng = np.random.default_rng(seed)
    Y = sample_sphere(k, samples, rng) @ sigma.frame.T
    vals = np.asarray(f(Y))
    vol = sphere_volume(k)
    if samples > 1:
        sd = math.sqrt(np.var(vals.real, ddof=1) + np.var(vals.imag, ddof=1))
    else:
        sd = 0.0
    mean = vals.mean()
    value = complex(mean) if np.iscomplexobj(vals) else float(mean)
    return SphericalEstimate(vol * value, vol * sd / math.sqrt(samples), samples, seed)


def closed_form_average_quadratic(F: np.ndarray):
    """Exact integral of ``sum F[i,j] Y^i conj(Y^j)`` over the unit sphere of C^k."""
    F = np.asarray(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ValueError(f"coefficients must be k x k, got {F.shape}")
    k = F.shape[0]
    return sphere_volume(k) / k * np.trace(F)


def closed_form_average_quartic(G: np.ndarray):
    """Exact integral of ``sum G[i,j,r,s] Y^i conj(Y^j) Y^r conj(Y^s)`` over the unit sphere of C^k."""
    G = np.asarray(G)
    if G.ndim != 4 or len(set(G.shape)) != 1:
        raise ValueError(f"coefficients must be k x k x k x k, got {G.shape}")
    k = G.shape[0]
    s = np.einsum("iijj->", G) + np.einsum("ijji->", G)
    return sphere_volume(k) / (k * (k + 1)) * s


def quadratic_moment_exact(k: int, i: int, j: int) -> float:
    return sphere_volume(k) / k * float(i == j)


def quartic_moment_exact(k: int, i: int, j: int, r: int, s: int) -> float:
    return sphere_volume(k) / (k * (k + 1)) * float((i == j) * (r == s) + (i == s) * (r == j))


def integral_rc_form(R: CurvatureTensor, sigma: Subspace, u) -> float:
    """``(k/V) * integral of R(Y, Ybar, u, ubar)`` over unit ``Y`` in ``sigma``."""
    u = np.asarray(u, dtype=complex)
    E = sigma.frame
    F = np.einsum("ijab,ip,jq,a,b->pq", R.entries, E, E.conj(), u, u.conj())
    k = sigma.k
    return float((k / sphere_volume(k) * closed_form_average_quadratic(F)).real)


def integral_ricci_k(R: CurvatureTensor, sigma: Subspace, X) -> float:
    """``(k/V) * integral of R(X, Xbar, Y, Ybar)`` over unit ``Y`` in ``sigma``."""
    X = np.asarray(X, dtype=complex)
    if not sigma.contains(X):
        raise ValueError("X does not lie in the subspace")
    E = sigma.frame
    F = np.einsum("ijab,i,j,ap,bq->pq", R.entries, X, X.conj(), E, E.conj())
    k = sigma.k
    return float((k / sphere_volume(k) * closed_form_average_quadratic(F)).real)


def integral_scalar_k(R: CurvatureTensor, sigma: Subspace) -> float:
    """``k(k+1)/(2V) * integral of H(Y)`` over unit ``Y`` in ``sigma``; CKL tensors only."""
    if not R.ckl:
        raise ValueError("the integral form of S_k holds only for CKL tensors")
    E = sigma.frame
    G = np.einsum("ijab,ip,jq,ar,bs->pqrs", R.entries, E, E.conj(), E, E.conj())
    k = sigma.k
    return float((k * (k + 1) / (2 * sphere_volume(k)) * closed_form_average_quartic(G)).real)


@dataclass(frozen=True)
class MomentCheck:
    order: int
    k: int
    indices: tuple[int, ...]
    exact: float
    estimate: complex
    stderr: float
    ok: bool


def moment_suite(max_k: int = 4, samples: int = 100_000, seed: int = 0) -> list[MomentCheck]:
    """Compare MC estimates of every quadratic and quartic coordinate moment with the closed forms.

    One shared sample set per ``k``. A tiny absolute floor (``ROUNDING * V``) absorbs
    rounding when the integrand is constant on the sphere and the standard
    error is exactly zero.
    """
    out = []
    for k in range(1, max_k + 1):
        rng = np.random.default_rng([seed, k])
        Y = sample_sphere(k, samples, rng)
        vol = sphere_volume(k)
        floor = ROUNDING * vol

        def record(order, idx, vals, exact):
            mean = vals.mean()
            sd = math.sqrt(np.var(vals.real, ddof=1) + np.var(vals.imag, ddof=1))
            est = SphericalEstimate(vol * complex(mean), vol * sd / math.sqrt(samples), samples, seed)
            out.append(MomentCheck(order, k, idx, exact, est.value, est.stderr, est.agrees_with(exact, floor=floor)))

        for i, j in itertools.product(range(k), repeat=2):
            record(2, (i, j), Y[:, i] * Y[:, j].conj(), quadratic_moment_exact(k, i, j))
        for i, j, r, s in itertools.product(range(k), repeat=4):
            vals = Y[:, i] * Y[:, j].conj() * Y[:, r] * Y[:, s].conj()
            record(4, (i, j, r, s), vals, quartic_moment_exact(k, i, j, r, s))
    return out

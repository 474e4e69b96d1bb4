"""Closed-form and seeded random curvature tensors used as golden inputs."""

from __future__ import annotations

import re

import numpy as np

from .tensor import CurvatureTensor, hermitian_part, project_to_ckl


def fubini_study(n: int, c: float = 2.0) -> CurvatureTensor:
    """Constant holomorphic sectional curvature ``c``: ``R = (c/2)(d_ij d_kl + d_il d_kj)``."""
    if n < 1:
        raise ValueError("n must be positive")
    eye = np.eye(n)
    entries = 0.5 * c * (np.einsum("ij,kl->ijkl", eye, eye) + np.einsum("il,kj->ijkl", eye, eye))
    return CurvatureTensor(entries, ckl=True)


def flat(n: int, r: int | None = None) -> CurvatureTensor:
    r = n if r is None else r
    return CurvatureTensor(np.zeros((n, n, r, r), dtype=complex), ckl=(r == n))


def product(A: CurvatureTensor, B: CurvatureTensor) -> CurvatureTensor:
    """Curvature of the direct product: ``A`` and ``B`` on disjoint index blocks, no cross terms."""
    n, r = A.n + B.n, A.r + B.r
    out = np.zeros((n, n, r, r), dtype=complex)
    out[: A.n, : A.n, : A.r, : A.r] = A.entries
    out[A.n :, A.n :, A.r :, A.r :] = B.entries
    return CurvatureTensor(out, ckl=A.ckl and B.ckl)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. standard complex normal draws (``E|z|^2 = 1``)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hermitian(n: int, r: int, seed: int) -> CurvatureTensor:
    rng = np.random.default_rng(seed)
    return CurvatureTensor(hermitian_part(complex_normal(rng, (n, n, r, r))))


def random_ckl(n: int, seed: int) -> CurvatureTensor:
    rng = np.random.default_rng(seed)
    return project_to_ckl(complex_normal(rng, (n, n, n, n)))


def shifted_positive(n: int, seed: int, s: float) -> CurvatureTensor:
    """``random_ckl(n, seed) + s * fubini_study(n, 2)``."""
    return random_ckl(n, seed) + fubini_study(n, 2.0).scaled(s)


_PARAM_TYPES = {"n": int, "r": int, "seed": int, "c": float, "s": float}
_FACTOR = re.compile(r"^fs\((\d+),([^)]+)\)$")


def _params(text: str) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in _PARAM_TYPES:
            raise ValueError(f"bad model parameter {item!r}")
        out[key] = _PARAM_TYPES[key](value)
    return out


def from_spec(spec: str) -> CurvatureTensor:
    """Build a zoo tensor from a compact name such as ``fs:n=2,c=2``.

    Recognised forms: ``fs:n=,c=``, ``flat:n=,r=``, ``random-ckl:n=,seed=``,
    ``random-hermitian:n=,r=,seed=``, ``shifted-positive:n=,seed=,s=`` and
    ``product:fs(n1,c1)xfs(n2,c2)``.
    """
    name, _, rest = spec.strip().partition(":")
    if name == "product":
        factors = []
        for part in rest.split("x"):
            m = _FACTOR.match(part.strip())
            if m is None:
                raise ValueError(f"bad product factor {part!r}; expected fs(n,c)")
            factors.append(fubini_study(int(m.group(1)), float(m.group(2))))
        if len(factors) < 2:
            raise ValueError("product needs at least two factors")
        out = factors[0]
        for f in factors[1:]:
            out = product(out, f)
        return out
    p = _params(rest)
    try:
        if name == "fs":
            return fubini_study(p["n"], p.get("c", 2.0))
        if name == "flat":
            return flat(p["n"], p.get("r"))
        if name == "random-ckl":
            return random_ckl(p["n"], p.get("seed", 0))
        if name == "random-hermitian":
            return random_hermitian(p["n"], p.get("r", p["n"]), p.get("seed", 0))
        if name == "shifted-positive":
            return shifted_positive(p["n"], p.get("seed", 0), p.get("s", 1.0))
    except KeyError as exc:
        raise ValueError(f"model {name!r} is missing parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown model {name!r}")

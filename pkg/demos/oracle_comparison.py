"""Optimized certificates against the sampling oracle on one random bundle.

The sampler can only under-shoot a maximum and over-shoot a minimum, so every
optimized value should sit on the right side of it and close by. When the
Grassmannian is a single point both compute the same number, up to rounding.

Run with ``python demos/oracle_comparison.py``.
"""

import time

from rcpositivity import zoo
from rcpositivity.grassmann import KINDS, brute_force_certify, certify

R = zoo.random_hermitian(3, 2, seed=11)
for k, l in [(1, 1), (2, 1), (2, 2)]:
    for kind in KINDS:
        t0 = time.perf_counter()
        opt = certify(R, kind, k, l).value
        t1 = time.perf_counter()
        brute = brute_force_certify(R, kind, k, l)
        t2 = time.perf_counter()
        side = "max" if kind.startswith("uniform") else "min"
        ok = opt >= brute - 1e-12 if side == "max" else opt <= brute + 1e-12  # rounding slack
        print(
            f"{kind:>11}({k},{l}) [{side}] optimized {opt:+.8f} ({t1 - t0:.2f} s)"
            f"  sampled {brute:+.8f} ({t2 - t1:.2f} s)  gap {abs(opt - brute):.1e}  {'ok' if ok else 'WRONG SIDE'}"
        )

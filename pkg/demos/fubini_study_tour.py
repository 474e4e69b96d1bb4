"""Walk through the round projective metric, where every quantity has a closed form.

Run with ``python demos/fubini_study_tour.py``.
"""

import numpy as np

from rcpositivity import zoo
from rcpositivity.functionals import Subspace, random_unit_vector, ricci_k, sample_summary, scalar_k
from rcpositivity.grassmann import KINDS, certify
from rcpositivity.vanishing import compute_constants, vanishing_region

n = 3
R = zoo.fubini_study(n, 2.0)
rng = np.random.default_rng(0)

print(f"Fubini-Study, n = {n}, c = 2")
print("sampled ranges at k = 2:", sample_summary(R, k=2, samples=2000))

# Ric_k and S_k do not depend on the plane or the vector: k + 1 and k(k + 1)
for k in range(1, n + 1):
    S = Subspace.random(n, k, rng)
    X = S.frame @ random_unit_vector(k, rng)
    print(f"k={k}: Ric_k = {ricci_k(R, S, X):.12f}, S_k = {scalar_k(R, S):.12f}")

# every positivity notion is positive; uniform RC(k,1) equals k
for kind in KINDS:
    cert = certify(R, kind, 2, 1, restarts=4)
    print(f"{kind:>11}(2,1): value {cert.value:+.12f}, positive={cert.positive}")

consts = compute_constants(R, zoo.flat(n, 2), k=2, restarts=4)
print("constants:", consts.to_dict())

# (p, q, m) = (1, 3, 0) lies in the region; (1, 2, 0) sits on its boundary
for pqm in [(0, 1, 0), (1, 2, 0), (1, 3, 0), (2, 5, 1)]:
    print(pqm, "vanishes" if vanishing_region(consts, *pqm) else "no conclusion")

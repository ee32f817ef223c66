# A smooth example: log-sum-exp rows
#
# f(x)_i = log sum_j p_ij exp(x_j) + r_i has a unique eigenvector up to
# constants when its Jacobian at the eigenvector is irreducible. Here the
# eigenvalue is log 2 and v = (log 2, 3 log 2, 0).

import math

import numpy as np

from convexspec import fixtures
from convexspec.critical import critical_data, witness_matrix
from convexspec.model import evaluate
from convexspec.spectral import eigenvalue_bounds, find_eigenvector, spectral_projector

f = fixtures.f2()

for k in (1, 10, 100):
    lo, hi = eigenvalue_bounds(f, (0.0, 0.0, 0.0), k)
    print(f"k={k:4d}  {lo:.12f} <= lambda <= {hi:.12f}")

res = find_eigenvector(f, 1e-10)
v = np.array(res.v) - res.v[-1]
print("lambda - log 2 =", res.lam - math.log(2))
print("v / log 2 =", v / math.log(2))

P = np.array(witness_matrix(f, res.v, res.lam, 1e-9))
print("Jacobian at v:\n", P.round(6))
print("critical classes:", critical_data(f, res.v, res.lam, 1e-7).classes)

# Push a point up until f(z) <= lambda + z, then let the projector pull it
# down to an eigenvector. Every start gives the same v up to a constant.
rng = np.random.default_rng(0)
for _ in range(3):
    z = np.array(res.v) + rng.uniform(0, 3, 3)
    for _ in range(200):
        z = np.maximum(z, np.array(evaluate(f, tuple(z))) - res.lam)
    w = np.array(spectral_projector(f, res.lam, tuple(z), 1e-12))
    print("projected, normalized:", (w - w[-1]).round(9))

# Control problems behind the maps
#
# A finite MDP gives the Bellman map f(x)_i = max_a (r_i^a + P_i^a x). Its
# eigenvalue is the optimal mean reward, and the critical classes are the
# recurrent classes that optimal policies can sit in. Deterministic
# transitions give max-plus matrices.

import json
from pathlib import Path

from convexspec.maxplus import NEG_INF, as_maxplus, maxplus_critical, maxplus_eigen, maxplus_rho
from convexspec.mdp import brute_force_lambda, mdp_from_dict, mdp_to_map, optimal_class_check
from convexspec.scalars import format_vector as fmt
from convexspec.spectral import find_eigenvector

here = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
mdp = mdp_from_dict(json.loads((here / "f1_mdp.json").read_text()))
print("states:", mdp.states, " deterministic policies:", mdp.policy_count())

lam = brute_force_lambda(mdp)
res = find_eigenvector(mdp_to_map(mdp))
print("best mean reward over policies:", lam, " eigenvalue:", res.lam, " bias:", fmt(res.v))

rep = optimal_class_check(mdp, res.lam, res.v)
for cls, val, ok in rep.certified:
    print("  class", sorted(i + 1 for i in cls), "value", val, "optimal" if ok else "NOT optimal")
print("sampled", rep.sampled_policies, "policies;", "violations:", rep.violations)

# max-plus: a 3-node ring with a heavier 2-cycle
A = as_maxplus([[NEG_INF, 2, 0], [1, NEG_INF, NEG_INF], [0, NEG_INF, -1]])
rho, v = maxplus_eigen(A)
print("rho =", rho, "(Karp:", maxplus_rho(A), ") v =", fmt(v))
print("critical arcs:", sorted((i + 1, j + 1) for i, j in maxplus_critical(A, rho, v).arcs))

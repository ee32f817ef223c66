# Critical graph of a small piecewise-affine map
#
# f(x)_1 = max((x1 + x2)/2, (x1 + x3)/2, x3 - 3, x1)
# f(x)_2 = max((2 x1 + x2)/3, x1 - 1, x2)
# f(x)_3 = max(x1 - 2, x3)
#
# Each coordinate is a maximum of affine maps whose linear parts are
# stochastic rows, so f is monotone, convex and commutes with adding constants.

from convexspec import fixtures, scalars
from convexspec.critical import critical_data, invariant_critical_classes, witness_matrix
from convexspec.graphs import to_dot
from convexspec.model import evaluate
from convexspec.spectral import find_eigenvector

f = fixtures.f1()
print("f(1, 0, -1) =", scalars.format_vector(evaluate(f, (1, 0, -1))))

# The eigenvalue is found by bracketing the growth rate of f^k(0).
res = find_eigenvector(f)
print("lambda =", res.lam, " v =", scalars.format_vector(res.v), " status:", res.status)

# Critical nodes, classes and the cyclicity do not depend on which
# eigenvector is used; (0, 0, -2) is another one.
for v in [(0, 0, 0), (0, 0, -2)]:
    cd = critical_data(f, v, 0)
    print("v =", v, "classes:", [sorted(i + 1 for i in c) for c in cd.classes], "c(f) =", cd.cyclicity)

# A stochastic matrix in the subdifferential whose final graph is the critical graph.
P = witness_matrix(f, (0, 0, 0), 0)
for row in P:
    print("  ", scalars.format_vector(row))

# Only {3} is invariant: the row (1/2, 0, 1/2) is active at 0 and leaves {1, 2}.
print("invariant classes:", [sorted(i + 1 for i in c) for c in invariant_critical_classes(f, (0, 0, 0), 0)])

print(to_dot(cd.graph, cd.classes, "critical"))

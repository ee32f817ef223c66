# Periodic orbits and the cyclicity
#
# With a critical class that is a 2-cycle, orbits of f - lambda end up
# periodic with a period dividing 2. The eigenspace has one dimension per
# critical class, and the square of f splits the 2-cycle into two classes.

from convexspec import fixtures
from convexspec.scalars import format_vector as fmt
from convexspec.critical import critical_data
from convexspec.model import compose, evaluate
from convexspec.polyhedra import affine_hull, eigenspace_dimension, eigenspace_enumerate
from convexspec.spectral import periodic_limit

f = fixtures.f4()
cd = critical_data(f, (0, 0, 0), 0)
print("critical arcs:", sorted((i + 1, j + 1) for i, j in cd.graph.arcs))
print("class periods:", cd.class_periods(), " cyclicity:", cd.cyclicity)

x = (1, 0, 0)
for k in range(4):
    print(" ", k, fmt(x))
    x = evaluate(f, x)

orb = periodic_limit(f, 0, (1, 0, 0), cd.cyclicity)
print("period", orb.period, "orbit", [fmt(p) for p in orb.points])

# the eigenspace as a union of polyhedral cells, one per policy selection
cells = eigenspace_enumerate(f, 0)
print(len(cells), "nonempty cells")
for phi, K in cells[:3]:
    x0, basis = affine_hull(K)
    print("  policy", [k + 1 for k in phi], "point", fmt(x0), "dim", len(basis))

f2 = compose(f, f)
print("dim E(f)   =", eigenspace_dimension(f, 0))
print("dim E(f^2) =", eigenspace_dimension(f2, 0), "=", sum(cd.class_periods()))

"""A diagonal phase gauge acting on planar potentials.

A phase depending on the angle xi = y/x changes V0 and V1 but not the
combination V0 - (x^2 + y^2) V1^2 / 2.  For the superintegrable system
that combination is zero, so every gauge image is again superintegrable.
"""

import random
from fractions import Fraction

from superspin import catalog
from superspin.coeffring import Expression, context_2d, parse_expr

ctx = context_2d(declare_unknown=True)
V0, V1 = parse_expr("V0", ctx), parse_expr("V1", ctx)

alpha_dot = parse_expr("c*y/x", ctx)
new_v0, new_v1 = catalog.apply_gauge(V0, V1, alpha_dot)
print("alpha' =", alpha_dot)
print("V0~ =", new_v0)
print("V1~ =", new_v1)

rng = random.Random(3)
xi = parse_expr("y/x", ctx)
kept = 0
for _ in range(20):
    a = Expression.sum(Expression.const(Fraction(rng.randint(-5, 5), rng.randint(1, 4))) * xi ** n for n in range(3))
    kept += catalog.gauge_invariant(*catalog.apply_gauge(V0, V1, a)) == catalog.gauge_invariant(V0, V1)
print(f"\ninvariant preserved under {kept}/20 random gauges")

sup = catalog.build_superintegrable_2d(verify=False)
print("invariant of the superintegrable potentials:", catalog.gauge_invariant(*sup.potentials))

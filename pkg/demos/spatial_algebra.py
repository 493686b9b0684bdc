"""Symmetry algebra of the spatial system with V0 = 1/r^2, V1 = 1/r^2.

The nine integrals are total angular momentum J, a spin-dressed momentum
Pi and a spin-like vector S.  In the basis K = J - S, Pi, S the brackets
split into a Euclidean algebra e(3) generated by K, Pi and a commuting
rotation algebra generated by S.
"""

from superspin import catalog
from superspin.liealg import (
    GeneratorSet,
    commutation_table,
    generators_3d_relations_basis,
    relations_3d,
    verify_relations,
)

spec = catalog.build_superintegrable_3d()
print("integrals:", ", ".join(spec.integrals))

basis = GeneratorSet.from_dict(generators_3d_relations_basis(spec.integrals))
table = commutation_table(basis)
print(f"closed: {table.closed}, Jacobi: {table.jacobi()}\n")
print(table.to_text())

report = verify_relations(table, relations_3d())
print()
for family, ok in report.families().items():
    print(f"{'holds' if ok else 'FAILS'}  {family}")

# the same nine integrals with hbar restored
tracked = catalog.build_superintegrable_3d("tracked")
print("\nwith hbar: V0 =", tracked.potentials[0], " V1 =", tracked.potentials[1])
print("dressed integrals commuting with H:", 9 - len(tracked.failures()), "/ 9")

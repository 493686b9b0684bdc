"""Restoring hbar in the spatial superintegrable system.

With p = -i hbar d the potentials become V0 = hbar^2/r^2 and V1 = hbar/r^2,
so both vanish as hbar -> 0 and the integrals reduce to free-particle ones.
The planar system keeps hbar-free potentials.
"""

from superspin import catalog
from superspin.coeffring import parameter

hbar = parameter("hbar")
spatial = catalog.build_superintegrable_3d("tracked")
for label, V in zip(("V0", "V1"), spatial.potentials):
    print(f"{label} = {V}    at hbar = 0: {V.substitute({hbar: 0})}")
for name, X in spatial.integrals.items():
    print(f"{name:3} = {X}")

planar = catalog.build_superintegrable_2d(hbar=True)
print("\nplanar potentials:", ", ".join(map(str, planar.potentials)))

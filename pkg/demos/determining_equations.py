"""Determining equations for a general first-order integral.

Commutes the Hamiltonian with a first-order ansatz whose coefficients are
unknown functions, collects the coefficient of every derivative and Pauli
matrix, and compares the resulting blocks with hand-transcribed references.
"""

from superspin.determining import (
    STAGES,
    DeterminingSystem,
    check_solution,
    generate,
    match_reference,
    reference_comparison,
)

for mode in ("2d", "3d"):
    for stage in STAGES:
        system = generate(mode, stage)
        print(f"{mode} {stage:6}: {len(system):2} equations, blocks {system.blocks()}")

print()
print(generate("2d", "first").to_text())

print()
for mode in ("2d", "3d"):
    for name, gen, ref in reference_comparison(mode):
        print(f"{mode} block {name}: {match_reference(gen, ref).summary()}")

# a one-parameter family of solutions of the spin block, with V1 left formal
spin = DeterminingSystem("3d", "second", tuple(generate("3d", "second").block("spin")))
w = {"A1": "0", "A2": "z*w", "A3": "-y*w", "B1": "-z*w", "B2": "0",
     "B3": "x*w", "C1": "y*w", "C2": "-x*w", "C3": "0"}
print("\nrotational w-solution:", check_solution(spin, w, formal=["V1"]).summary())

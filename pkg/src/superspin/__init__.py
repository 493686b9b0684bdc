"""Exact verification of first-order integrals of motion for Pauli Hamiltonians
with spin-orbit coupling."""

__version__ = "0.1.0"

"""Contextuality of multi-qubit symplectic polar space configurations."""

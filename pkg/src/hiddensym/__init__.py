"""Exact operator algebra and numerical checks for the hidden symmetry of the Dirac-Coulomb problem."""

__version__ = "0.1.0"

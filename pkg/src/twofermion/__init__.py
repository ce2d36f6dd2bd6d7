"""Bound states of the electron-positron system from a non-Hamiltonian
relativistic two-fermion wave equation.

All internal quantities are dimensionless: energies in units of the electron
mass ``m`` and lengths in electron Compton lengths. Physical units are
attached only when reporting (see :mod:`twofermion.constants`).
"""

__version__ = "0.1.0"

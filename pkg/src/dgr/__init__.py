"""Exact algebraic analysis of the DGR integrable system.

Subpackages and modules:
  algebra        exact rationals, sparse polynomials, resultants, modular kernels
  mechanics      the pair H, G, Poisson bracket, symmetry, quantum lift
  balances       initial locus, Kovalevskaya exponents, Laurent balances
  curves         Painleve curves, genus, elliptic quotients, j-invariants
  filtration     pole-order filtration, map to P^5, image relations
  integrability  Wronskians, quadratic expressibility, critical values
  cli            the ``dgr`` command
"""

__version__ = "0.1.0"

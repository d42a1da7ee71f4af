"""Shared test helpers: sympy conversion and random polynomials."""

import sympy
from sympy.parsing.sympy_parser import parse_expr

from dgr.algebra import MultiPoly, PolyRing, mpq, to_text


def sym_symbols(ring):
    return {n: sympy.Symbol(n) for n in ring.names}


def to_sympy(f, ring=None):
    """MultiPoly -> sympy expression, built from the canonical text."""
    ring = ring or f.ring
    return parse_expr(to_text(f).replace("^", "**"), local_dict=sym_symbols(ring))


def from_sympy(expr, ring):
    expr = sympy.expand(expr)
    return ring(str(expr).replace("**", "^")) if expr != 0 else ring.zero()


def random_poly(ring, rng, terms=4, max_exp=3, coeff=9, weight=None):
    """Random polynomial with small rational coefficients, optionally weighted-homogeneous."""
    if weight is not None:
        monos = ring.monomials_of_weight(weight)
        if not monos:
            return ring.zero()
        picks = [rng.choice(monos) for _ in range(terms)]
    else:
        picks = [tuple(rng.randint(0, max_exp) for _ in ring.names) for _ in range(terms)]
    items = []
    for e in picks:
        c = mpq(rng.randint(-coeff, coeff), rng.randint(1, 4))
        if c:
            items.append((tuple(e), c))
    return ring.from_terms(items)


XYZ = PolyRing(("x", "y", "z"))


def is_poly(x):
    return isinstance(x, MultiPoly)

"""Exact arithmetic kernel: scalars, sparse polynomials, eliminations, modular kernels."""
from .modular import (CertificationError, InsufficientPrimes, PrimeImage, kernel_exact, solve_with_witness,
                      kernel_of_matrix, kernel_rational, rational_reconstruct, solve_rational)
from .poly import (BadPrime, ExponentOverflow, MultiPoly, PolyRing, common_ring, divexact,
                   parse_poly, to_text)
from .ratfunc import RationalFunction
from .scalars import RHO, SQRT_MINUS_3, QRho, format_rational, mpq, qq, rho_power
from .univariate import (EliminationError, discriminant, gcd, rational_roots, resultant,
                         squarefree_decomposition, squarefree_part)


def weighted_scaling(f, power):
    """Apply x -> rho^(power * weight(x)) x to every variable of f."""
    d = {}
    for e, c in f.terms.items():
        k = (power * f.ring.weight_of(e)) % 6
        v = c if k == 0 else rho_power(k) * c
        if isinstance(v, QRho) and v.y == 0:
            v = v.x
        d[e] = v
    return MultiPoly(f.ring, d)


def span_solve(target, candidates):
    """Rational coefficients c with sum c_j * candidates[j] == target, or None."""
    index = {}
    rows = []
    for j, cand in enumerate(candidates):
        for e, c in cand.terms.items():
            r = index.get(e)
            if r is None:
                r = index[e] = len(rows)
                rows.append({})
            rows[r][j] = c
    rhs = [0] * len(rows)
    for e, c in target.terms.items():
        r = index.get(e)
        if r is None:
            return None
        rhs[r] = c
    if not candidates:
        return [] if not target else None
    sol = solve_rational(rows, rhs, len(candidates))
    if sol is None:
        return None
    acc = target.ring.zero()
    for c, cand in zip(sol, candidates):
        if c:
            acc = acc + cand.scale(c)
    if acc != target:
        raise CertificationError("span solution failed exact check")
    return sol

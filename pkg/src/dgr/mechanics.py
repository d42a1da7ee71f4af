"""The DGR Hamiltonian pair, its Poisson bracket, symmetries and quantum lift."""
import json
import random
from functools import lru_cache

from .algebra import (MultiPoly, PolyRing, SQRT_MINUS_3, mpq, qq, resultant,
                      span_solve, weighted_scaling)
from .algebra.univariate import squarefree_part

PHASE = PolyRing(("q", "Q", "p", "P", "a"), (2, 2, 3, 3, 4))
PAIRS = (("q", "p"), ("Q", "P"))

# Hamiltonian in the sqrt(-3)-free coordinates; the a*q deformation is included.
H_TEXT = "1/2*p^2 - 1/6*P^2 + q^3 - 3/2*q*Q^2 + 1/2*Q^3 + a*q"

G_UNDEFORMED_TEXT = (
    "1/9*p*P^3 - 1/18*P^4 - 3/2*Q^3*p^2 - 3/2*q*Q^2*p*P - 3/2*Q^3*p*P"
    " + (-q^2*Q - q*Q^2 + 1/2*Q^3)*P^2"
    " - 3/2*q^3*Q^3 + 9/8*q^2*Q^4 + 9/4*q*Q^5 - 15/8*Q^6"
)

# Deformation terms of G.  The first block's coefficient is -3/2: it is the
# unique value making {H, G} vanish identically in a (see the decision log).
G_DEFORMATION_TEXT = (
    "a*(-3/2*(q^2 + q*Q - 2*Q^2)*Q^2 + Q*p*P + 1/3*(q - Q)*P^2) - 3/2*Q^2*a^2"
)

# The pair as originally given, in coordinates (q1, q2, p1, p2); s stands for sqrt(-3).
_ORIGINAL = PolyRing(("q1", "q2", "p1", "p2", "s"))
_H_ORIGINAL = "1/2*(p1^2 + p2^2) + q1^3 + 1/2*q1*q2^2 + s/18*q2^3"
_G_ORIGINAL = (
    "p1*p2^3 - s/2*p2^4 + 1/2*q2^3*p1^2 - (3/2*q1*q2^2 - s/2*q2^3)*p1*p2"
    " + (3*q1^2*q2 - s*q1*q2^2 + 1/2*q2^3)*p2^2"
    " + 1/2*q1^3*q2^3 + s/8*q1^2*q2^4 + 1/4*q1*q2^5 + 5*s/72*q2^6"
)


class ConsistencyError(ArithmeticError):
    pass


class DegenerateFibre(ArithmeticError):
    pass


def poisson_bracket(f, g, convention="momentum-first"):
    """{f, g} = sum df/dp * dg/dq - df/dq * dg/dp over the canonical pairs.

    With this convention {p, q} = 1 and the flow of H is x' = {H, x}.
    ``convention="standard"`` gives the opposite sign.
    """
    out = f.ring.zero()
    for x, y in PAIRS:
        fy, gx = f.diff(y), g.diff(x)
        if fy and gx:
            out = out + fy * gx
        fx, gy = f.diff(x), g.diff(y)
        if fx and gy:
            out = out - fx * gy
    if convention == "standard":
        return -out
    if convention != "momentum-first":
        raise ValueError(f"unknown bracket convention {convention!r}")
    return out


class HamiltonianSystem:
    """Canonical pairs (q,p), (Q,P) with weights (2,2,3,3), a of weight 4, and the pair H, G."""

    def __init__(self, H, G):
        self.ring = H.ring
        self.H = H
        self.G = G
        self.pairs = PAIRS

    def bracket(self, f, g, convention="momentum-first"):
        return poisson_bracket(f, g, convention)

    def vector_field(self):
        """Right-hand sides of x' = {H, x} for x in (q, Q, p, P)."""
        return {x: poisson_bracket(self.H, self.ring.var(x)) for x in ("q", "Q", "p", "P")}

    def at(self, a):
        """The pair with the deformation parameter specialized."""
        return HamiltonianSystem(self.H.subs({"a": a}), self.G.subs({"a": a}))

    def to_dict(self):
        return {
            "variables": list(self.ring.names),
            "weights": list(self.ring.weights),
            "pairs": [list(p) for p in self.pairs],
            "H": str(self.H),
            "G": str(self.G),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


@lru_cache(maxsize=None)
def dgr_system():
    H = PHASE(H_TEXT)
    G = PHASE(G_UNDEFORMED_TEXT) + PHASE(G_DEFORMATION_TEXT)
    return HamiltonianSystem(H, G)


def _adjoin_sqrt_minus_3(f, target):
    """Interpret the variable s of f as sqrt(-3) and move f into target."""
    ring = f.ring
    si = ring.index["s"]
    out = {}
    for e, c in f.terms.items():
        k = ring.exponent_of(e, si)
        base = e - k * ring.unit(si)
        out[base] = out.get(base, 0) + SQRT_MINUS_3 ** k * c
    no_s = MultiPoly(ring, {e: c for e, c in out.items() if c})
    return no_s.to_ring(target)


def canonicalize_dgr():
    """Rebuild the sqrt(-3)-free pair from the original one and check it.

    q1 = q, q2 = sqrt(-3) Q, p1 = p, p2 = P / sqrt(-3); the second integral is
    divided by sqrt(-3).  Then the a-deformation is added.
    """
    src = PolyRing(("q1", "q2", "p1", "p2"))
    H0 = _adjoin_sqrt_minus_3(_ORIGINAL(_H_ORIGINAL), src)
    G0 = _adjoin_sqrt_minus_3(_ORIGINAL(_G_ORIGINAL), src)
    r = SQRT_MINUS_3
    images = {
        "q1": PHASE.var("q"),
        "q2": PHASE.var("Q").scale(r),
        "p1": PHASE.var("p"),
        "p2": PHASE.var("P").scale(r.inverse()),
    }
    H = H0.compose(images, PHASE)
    G = G0.compose(images, PHASE).scale(r.inverse())
    for name, f in (("H", H), ("G", G)):
        if not f.is_rational():
            raise ConsistencyError(f"{name} keeps a sqrt(-3) part after substitution")
    H = H.to_rational() + PHASE("a*q")
    G = G.to_rational() + PHASE(G_DEFORMATION_TEXT)
    return HamiltonianSystem(H, G)


def sigma(f, power=1):
    """The order-6 symmetry: each variable is multiplied by rho^weight."""
    return weighted_scaling(f, power)


# ---- fixed points -----------------------------------------------------------

_FIXED_LOCUS = {
    1: ((), ("q", "Q", "p", "P")),
    2: (("p", "P"), ("q", "Q")),
    3: (("q", "Q"), ("p", "P")),
}


def generic_values(seed, count=1, bound=50):
    """Deterministic nonzero rational (h, g) pairs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        h = mpq(rng.randint(-bound, bound), rng.randint(1, 7))
        g = mpq(rng.randint(-bound, bound), rng.randint(1, 7))
        if h and g:
            out.append((h, g))
    return out


def fixed_point_count(power, c=None, a=0, seed=0, tries=5):
    """Number of points of the fibre H=h, G=g fixed by sigma^power.

    With c=None generic values are drawn from a seeded sequence and redrawn
    (up to ``tries`` times) if the fibre turns out degenerate.
    """
    if power not in _FIXED_LOCUS:
        raise ValueError("power must be 1, 2 or 3")
    if c is not None:
        return _count_fixed(power, qq(c[0]), qq(c[1]), qq(a))
    last = None
    for h, g in generic_values(seed, tries):
        try:
            return _count_fixed(power, h, g, qq(a))
        except DegenerateFibre as exc:
            last = exc
    raise last


def _count_fixed(power, h, g, a):
    free, zero = _FIXED_LOCUS[power]
    S = dgr_system()
    vals = {v: 0 for v in zero}
    vals["a"] = a
    f1 = S.H.subs(vals) - h
    f2 = S.G.subs(vals) - g
    if not free:
        return int(not f1 and not f2)
    x, y = free
    # separate the solutions by a linear form u = y + k*x and count simple roots in u
    ring = PolyRing((x, "u"))
    for k in (1, 2, 3, 5, 7):
        img = {x: ring.var(x), y: ring.var("u") - ring.var(x).scale(k)}
        e1 = f1.compose({**img, **{n: 0 for n in f1.ring.names if n not in free}}, ring)
        e2 = f2.compose({**img, **{n: 0 for n in f2.ring.names if n not in free}}, ring)
        lead1 = e1.leading_coeff(x)
        lead2 = e2.leading_coeff(x)
        if not (lead1.is_constant() or lead2.is_constant()):
            continue
        R = resultant(e1, e2, x)
        if not R:
            raise DegenerateFibre("equations share a component on the fixed locus")
        n = R.degree("u")
        sqf = squarefree_part(R, "u").degree("u")
        if sqf == n:
            return n
    raise DegenerateFibre("degenerate fibre")


# ---- Whitney umbrella component ----------------------------------------------

UMBRELLA_TEXTS = (
    "3*Q*p + 2*q*P + Q*P",
    "9*q*Q^2 - 9*Q^3 + 2*P^2",
    "9*q^2*Q - 9*Q^3 - 3*p*P + P^2",
    "6*q^3 - 6*Q^3 + 3*p^2 + P^2",
)


class MembershipError(ArithmeticError):
    pass


def _graded_multipliers(target, gens):
    ring = PolyRing(("q", "Q", "p", "P"), (2, 2, 3, 3))
    target = target.to_ring(ring)
    gens = [f.to_ring(ring) for f in gens]
    w = target.weighted_degree()
    cands, labels = [], []
    for i, f in enumerate(gens):
        for mono in ring.monomials_of_weight(w - f.weighted_degree()):
            cands.append(ring.monomial(mono) * f)
            labels.append((i, mono))
    sol = span_solve(target, cands)
    if sol is None:
        return None
    mult = [ring.zero() for _ in gens]
    for c, (i, mono) in zip(sol, labels):
        if c:
            mult[i] = mult[i] + ring.monomial(mono, c)
    return mult


def verify_component_membership():
    """Express H and G (a=0) in the ideal of the four umbrella equations.

    Returns {"H": [m1..m4], "G": [m1..m4]} with weighted-homogeneous
    multipliers; raises MembershipError if a graded system is infeasible.
    """
    S = dgr_system().at(0)
    gens = [PHASE(t) for t in UMBRELLA_TEXTS]
    out = {}
    for name, f in (("H", S.H), ("G", S.G)):
        mult = _graded_multipliers(f, gens)
        if mult is None:
            raise MembershipError(f"{name} is not in the ideal of the umbrella equations")
        check = sum((m * g.to_ring(m.ring) for m, g in zip(mult, gens)), mult[0].ring.zero())
        if check != f.to_ring(check.ring):
            raise MembershipError("multiplier identity failed")
        out[name] = mult
    return out


# ---- Weyl algebra ----------------------------------------------------------------

WEYL = PolyRing(("q", "Q", "p", "P", "hbar"), (2, 2, 3, 3, 5))


@lru_cache(maxsize=None)
def _binom(n, k):
    from math import comb
    return comb(n, k)


class WeylElement:
    """Normally ordered element (positions left of momenta) of the Weyl algebra.

    Relations: p q = q p + hbar and P Q = Q P + hbar; other pairs commute.
    The underlying MultiPoly lists the normally ordered monomials.
    """

    __slots__ = ("poly",)

    def __init__(self, poly):
        if isinstance(poly, str):
            poly = WEYL(poly)
        elif isinstance(poly, MultiPoly) and poly.ring is not WEYL:
            poly = poly.to_ring(WEYL)
        self.poly = poly

    def __add__(self, other):
        return WeylElement(self.poly + _weyl(other).poly)

    def __sub__(self, other):
        return WeylElement(self.poly - _weyl(other).poly)

    def __neg__(self):
        return WeylElement(-self.poly)

    def __eq__(self, other):
        return self.poly == _weyl(other).poly

    def __mul__(self, other):
        other = _weyl(other)
        out = {}
        un = WEYL.unpack
        for e1, c1 in self.poly.terms.items():
            a1, b1, c_1, d1, h1 = un(e1)
            for e2, c2 in other.poly.terms.items():
                a2, b2, c_2, d2, h2 = un(e2)
                # move p^c_1 past q^a2 and P^d1 past Q^b2
                for k in range(min(c_1, a2) + 1):
                    ck = _binom(c_1, k) * _binom(a2, k) * _fact(k)
                    for m in range(min(d1, b2) + 1):
                        cm = _binom(d1, m) * _binom(b2, m) * _fact(m)
                        e = WEYL.pack((a1 + a2 - k, b1 + b2 - m, c_1 - k + c_2,
                                       d1 - m + d2, h1 + h2 + k + m))
                        out[e] = out.get(e, 0) + c1 * c2 * ck * cm
        return WeylElement(MultiPoly(WEYL, {e: c for e, c in out.items() if c}))

    def commutator(self, other):
        other = _weyl(other)
        return self * other - other * self

    def __repr__(self):
        return f"WeylElement({self.poly})"


def _fact(k):
    from math import factorial
    return factorial(k)


def _weyl(x):
    return x if isinstance(x, WeylElement) else WeylElement(WEYL(x) if not isinstance(x, MultiPoly) else x)


G_QUANTUM_CORRECTION = (
    "-hbar*(3/2*q*Q*p + 9/4*Q^2*p + q^2*P + 2*q*Q*P - 3/4*Q^2*P)"
    " + hbar^2*(-5/12*q + 5/4*Q)"
)


def quantum_pair():
    S = dgr_system().at(0)
    H = WeylElement(_drop_a(S.H))
    G = WeylElement(_drop_a(S.G) + WEYL(G_QUANTUM_CORRECTION))
    return H, G


def _drop_a(f):
    return f.subs({"a": 0}).to_ring(WEYL)


def weyl_commutator_check():
    """[H, G_hbar] in the Weyl algebra; identically zero for the quantum lift."""
    H, G = quantum_pair()
    return H.commutator(G).poly

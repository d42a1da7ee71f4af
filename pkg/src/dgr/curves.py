"""Painleve divisor: plane model, genus by Riemann-Hurwitz, elliptic quotients, j-invariants."""
import json
import random
from fractions import Fraction
from math import gcd as igcd

from .algebra import (MultiPoly, divexact, PolyRing, RationalFunction, mpq, qq, resultant,
                      squarefree_decomposition, to_text)
from .algebra.univariate import gcd, rational_roots
from .balances import BalanceError, SeriesEvaluator
from .mechanics import dgr_system


class CurveError(ArithmeticError):
    pass


FAMILY_PARAMS = ("al", "be", "ga", "de", "ep", "ze")
# w(x) = 1, w(y) = 4 make the family homogeneous of weight 12
FAMILY = PolyRing(("x", "y") + FAMILY_PARAMS, (1, 4, 0, 0, 0, 6, 6, 12))
FAMILY_TEXT = "(y + al*x^4)*(y + be*x^4)*(y + ga*x^4) + de*x^2*y + ep*x^6 + ze"

CURVE = PolyRing(("x", "y", "h", "g", "a"), (1, 4, 6, 12, 4))
INVARIANTS = PolyRing(("g1", "g2", "g3", "a", "h", "g"), (1, 4, 6, 4, 6, 12))
QUOTIENT = PolyRing(("s", "t", "h", "g", "a"), (2, 4, 6, 12, 4))


class CurveFamily:
    """A plane curve F(x, y) = 0 whose coefficients are polynomials in parameters.

    ``coordinates`` optionally records the values of (al, be, ga, de, ep, ze)
    that present F as a member of the cubic-in-y family.
    """

    def __init__(self, poly, name="", coordinates=None):
        self.poly = poly
        self.ring = poly.ring
        self.name = name
        self.coordinates = coordinates

    @property
    def params(self):
        return tuple(n for n in self.ring.names if n not in ("x", "y"))

    def specialize(self, values):
        """Substitute parameter values; coordinates follow along."""
        coords = None
        if self.coordinates is not None:
            coords = {k: v.subs(values) for k, v in self.coordinates.items()}
        return CurveFamily(self.poly.subs(values), self.name, coords)

    def is_sigma_invariant(self):
        """x -> rho x, y -> rho^4 y, parameters by their weights: every term has weight 0 mod 6."""
        return all(self.ring.weight_of(e) % 6 == self.poly.weighted_degree() % 6 for e in self.poly.terms)

    def to_dict(self):
        d = {"name": self.name, "curve": to_text(self.poly)}
        if self.coordinates is not None:
            d["coordinates"] = {k: to_text(v) for k, v in self.coordinates.items()}
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def general_family():
    coords = {n: FAMILY.var(n) for n in FAMILY_PARAMS}
    return CurveFamily(FAMILY(FAMILY_TEXT), "general", coords)


def family_member(coords, ring):
    """The family polynomial at coordinates given as polynomials of ``ring`` (which holds x, y)."""
    images = {"x": ring.var("x"), "y": ring.var("y")}
    images.update(coords)
    return FAMILY(FAMILY_TEXT).compose(images, ring)


# ---- invariants along the balance and the plane model ----------------------------------

def invariants_on_balance(balance):
    """h(gamma), g(gamma): H and G evaluated on the balance, checked t-free."""
    if balance.order < 14:
        raise BalanceError(f"balance order {balance.order} too small, need 14")
    sysm = dgr_system()
    ev = SeriesEvaluator(balance)
    out = []
    for f in (sysm.H, sysm.G):
        if not balance.a_symbolic:
            f = f.subs({"a": 0})
        s = ev.evaluate(f)
        for m, c in s.terms():
            if m != 0 and c:
                raise CurveError(f"invariant depends on t at order {m}")
        out.append(s.coefficient(0))
    return tuple(out)


def painleve_plane_model(balance):
    """Eliminate gamma3 with h(gamma) = h and rewrite g(gamma) = g in x^2 = 6 g1^2, y = 9 g2."""
    hg, gg = invariants_on_balance(balance)
    hg, gg = hg.to_ring(INVARIANTS), gg.to_ring(INVARIANTS)
    if hg.degree("g3") != 1:
        raise CurveError("h(gamma) is not linear in gamma3")
    lin = hg.coeff("g3", 1)
    if not lin.is_constant():
        raise CurveError("gamma3 coefficient of h is not constant")
    g3 = (INVARIANTS.var("h") - hg.coeff("g3", 0)).scale(1 / lin.constant_value())
    rel = gg.subs({"g3": g3}) - INVARIANTS.var("g")
    terms = []
    for (g1, g2, g3e, a, h, g), c in rel.items():
        if g1 % 2:
            raise CurveError("odd power of gamma1 in the plane model")
        # g1^(2j) = (x^2/6)^j, g2 = y/9
        j = g1 // 2
        terms.append(((g1, g2, h, g, a), c / (mpq(6) ** j * mpq(9) ** g2)))
    F = CURVE.from_terms(terms)
    F = F.scale(1 / F.coeff_monomial((0, 3, 0, 0, 0)))
    name = "painleve-a" if balance.a_symbolic else "painleve-0"
    coords = None if "a" in F.variables() else readoff(F)
    return CurveFamily(F, name, coords)


def readoff(F):
    """(al, be, ga, de, ep, ze) presenting F in the cubic family, with be = ga the repeated root."""
    ring = F.ring
    e1 = F.coeff_monomial(_exps(ring, x=4, y=2))
    e2 = F.coeff_monomial(_exps(ring, x=8, y=1))
    e3 = F.coeff_monomial(_exps(ring, x=12))
    cubic = [-e3, e2, -e1, 1]
    roots = rational_roots(cubic)
    mult = {r: _multiplicity(cubic, r) for r in roots}
    if sum(mult.values()) != 3:
        raise CurveError("leading form does not split over Q")
    ordered = sorted(roots, key=lambda r: (mult[r], r))
    vals = [r for r in ordered for _ in range(mult[r])]
    x, y = ring.var("x"), ring.var("y")
    coords = {
        "al": ring(mpq(vals[0].numerator, vals[0].denominator)),
        "be": ring(mpq(vals[1].numerator, vals[1].denominator)),
        "ga": ring(mpq(vals[2].numerator, vals[2].denominator)),
        "de": _coefficient_of(F, x ** 2 * y),
        "ep": _coefficient_of(F, x ** 6),
        "ze": _coefficient_of(F, ring.one()),
    }
    if family_member(coords, ring) != F:
        raise CurveError("curve is not a member of the cubic family")
    return coords


def _exps(ring, **kw):
    return tuple(kw.get(n, 0) for n in ring.names)


def _multiplicity(coeffs, r):
    from .algebra.univariate import root_multiplicity
    return root_multiplicity(coeffs, r)


def _coefficient_of(F, mono):
    """Coefficient of the x,y-monomial ``mono`` as a polynomial in the parameters."""
    (e, _), = mono.terms.items()
    ring = F.ring
    xi, yi = ring.index["x"], ring.index["y"]
    want = (ring.exponent_of(e, xi), ring.exponent_of(e, yi))
    d = {}
    for t, c in F.terms.items():
        if (ring.exponent_of(t, xi), ring.exponent_of(t, yi)) == want:
            d[t - e] = c
    return MultiPoly(ring, d)


# ---- genus by Riemann-Hurwitz -------------------------------------------------------------

class Stratum:
    """Parameter constraints: polynomial substitutions plus inequalities that must hold.

    ``substitution`` maps parameter names to texts in the remaining (and possibly
    new auxiliary) parameters; ``nonzero`` lists texts that must not vanish.
    ``factor`` names a known factor of the curve on this stratum; the genus is
    then that of the residual component.
    """

    def __init__(self, name, substitution=None, nonzero=(), multiplicity_two=False, aux=(), factor=None):
        self.name = name
        self.factor = factor
        self.substitution = dict(substitution or {})
        self.nonzero = tuple(nonzero)
        self.multiplicity_two = multiplicity_two
        self.aux = tuple(aux)

    def apply(self, curve):
        ring = curve.ring.extend(self.aux, (0,) * len(self.aux))
        F = curve.poly.to_ring(ring)
        coords = None
        if curve.coordinates is not None:
            coords = {k: v.to_ring(ring) for k, v in curve.coordinates.items()}
        # substitutions apply one after another, in the order listed
        for n, t in self.substitution.items():
            image = {n: ring(t)}
            F = F.subs(image)
            if coords is not None:
                coords = {k: v.subs(image) for k, v in coords.items()}
        return CurveFamily(F, f"{curve.name}|{self.name}", coords)

    def to_dict(self):
        return {"name": self.name, "substitution": self.substitution, "nonzero": list(self.nonzero),
                "multiplicity_two": self.multiplicity_two, "factor": self.factor}


STRATA = {
    "generic": Stratum("generic", nonzero=("(al-be)*(be-ga)*(ga-al)",)),
    "beta=gamma": Stratum("beta=gamma", {"ga": "be"}, nonzero=("al-be", "de*be-ep")),
    "beta=gamma,eps=beta*delta": Stratum(
        "beta=gamma,eps=beta*delta", {"ga": "be", "ep": "be*de"},
        nonzero=("al-be", "ze", "de^2-3*ze*(al-be)", "de^2-4*ze*(al-be)")),
    # 3 ze (al - be) = de^2, parametrized by al = be + 3 ze k^2, de = 3 ze k
    "double-points": Stratum(
        "double-points", {"ga": "be", "ep": "be*de", "al": "be + 3*ze*k^2", "de": "3*ze*k"},
        nonzero=("ze", "k"), multiplicity_two=True, aux=("k",)),
}
# de^2 = 4 ze (al - be) parametrized by al = be + k, de = 2 m k, ze = m^2 k
STRATA["elliptic"] = Stratum(
    "elliptic", {"ga": "be", "ep": "be*de", "al": "be + k", "de": "2*m*k", "ze": "m^2*k"},
    nonzero=("m", "k"), aux=("k", "m"))
STRATA["alpha=beta"] = Stratum(
    "alpha=beta", {"ga": "be", "ep": "be*de", "al": "be"}, nonzero=("ze", "de"))
STRATA["reducible"] = Stratum(
    "reducible", {"ga": "be", "ep": "be*de", "ze": "0"}, nonzero=("al-be", "de"), factor="y + be*x^4")


def resultant_xy(F):
    """Res_y(F, dF/dy)."""
    return resultant(F, F.diff("y"), "y")


def generic_specialization(ring, names, nonzero=(), seed=0, tries=50):
    """Deterministic random nonzero integers for ``names`` keeping the ``nonzero`` texts nonzero."""
    rng = random.Random(seed)
    checks = [ring(t) for t in nonzero]
    for _ in range(tries):
        vals = {n: rng.choice([-1, 1]) * rng.randint(2, 40) for n in names}
        if all(c.subs(vals) for c in checks):
            return vals
    raise CurveError("no generic specialization found")


class GenusCertificate:
    def __init__(self, genus, point, resultant_degree, decomposition, finite, infinity, degree):
        self.genus = genus
        self.point = point
        self.resultant_degree = resultant_degree
        self.decomposition = decomposition
        self.finite = finite
        self.infinity = infinity
        self.degree = degree

    def __int__(self):
        return self.genus

    def to_dict(self):
        return {
            "genus": self.genus,
            "specialization": {k: str(v) for k, v in sorted(self.point.items())},
            "resultant_degree": self.resultant_degree,
            "squarefree_decomposition": [[to_text(f), m] for f, m in self.decomposition],
            "finite_ramification": self.finite,
            "infinity_indices": self.infinity,
            "cover_degree": self.degree,
        }


def genus_simple_ramification(curve, stratum="generic", seed=0):
    """Genus of F = 0 via 2 - 2g = 2n - R for the projection to the x-line.

    R counts simple roots of Res_y(F, F_y) once and, on a stratum flagged
    ``multiplicity_two``, double roots twice once the curve is certified smooth
    above them; infinity is analysed by Newton-Puiseux in the chart x = 1/xi, y = u/xi^4.
    """
    if isinstance(stratum, str):
        stratum = STRATA[stratum]
    sc = stratum.apply(curve)
    F = sc.poly
    if stratum.factor is not None:
        F = divexact(F, F.ring(stratum.factor))
    n = F.degree("y")
    lc = F.leading_coeff("y")
    if not lc.is_constant():
        raise CurveError("curve is not monic in y")
    R = resultant_xy(F)
    if not R:
        raise CurveError("reducible on stratum")
    free = [v for v in F.ring.names if v not in ("x", "y") and v in (F.variables() + R.variables())]
    point = generic_specialization(F.ring, free, stratum.nonzero, seed) if free else {}
    Fs = F.subs(point)
    Rs = R.subs(point)
    if not Rs:
        raise CurveError("reducible on stratum")
    decomposition = squarefree_decomposition(Rs, "x") if Rs.degree("x") > 0 else []
    finite = 0
    for fac, m in decomposition:
        d = fac.degree("x")
        if m == 1:
            finite += d
        elif m == 2 and stratum.multiplicity_two and _smooth_above(Fs, fac):
            finite += 2 * d
        elif d == 1:
            x0 = -qq(fac.coeff_monomial(_exps(fac.ring))) / qq(fac.coeff_monomial(_exps(fac.ring, x=1)))
            finite += sum(e - 1 for e in ramification_over(Fs, x0))
        else:
            raise CurveError("ramification profile ambiguous")
    infinity = ramification_at_infinity(Fs)
    total = finite + sum(e - 1 for e in infinity)
    twice = total - 2 * n + 2
    if twice % 2 or twice < 0:
        raise CurveError("Riemann-Hurwitz count is inconsistent")
    return GenusCertificate(twice // 2, point, Rs.degree("x"), decomposition, finite, infinity, n)


def _smooth_above(F, fac):
    """No singular point of F = 0 lies over a root of fac: gcd(fac, Res_y(F, F_x)) = 1."""
    Rx = resultant(F, F.diff("x"), "y")
    return gcd(fac, Rx).degree("x") <= 0


def ramification_over(F, x0):
    """Ramification indices of the branches over the rational point x = x0 (numeric F)."""
    ring = F.ring
    fibre = F.subs({"x": x0})
    cs = [qq(fibre.coeff_monomial(_exps(ring, y=k))) for k in range(fibre.degree("y") + 1)]
    total = 0
    out = []
    for y0 in rational_roots(cs):
        mult = _multiplicity(cs, y0)
        total += mult
        if mult == 1:
            out.append(1)
            continue
        images = {n: 0 for n in ring.names}
        images.update(x=CHART.var("xi") + CHART(x0), y=CHART.var("v") + CHART(y0))
        local = F.compose(images, CHART)
        branches = puiseux_indices(local)
        if sum(branches) != mult:
            raise CurveError("ramification profile ambiguous")
        out.extend(branches)
    if total + _irrational_simple_roots(cs) != len(cs) - 1:
        raise CurveError("ramification profile ambiguous")
    return sorted(out)


def _irrational_simple_roots(cs):
    """Number of roots outside Q, provided they are all simple; otherwise an error."""
    f = EDGE.from_terms(((k,), c) for k, c in enumerate(cs))
    count = 0
    for fac, m in squarefree_decomposition(f, "w"):
        rational = len(rational_roots([fac.coeff_monomial((k,)) for k in range(fac.degree("w") + 1)]))
        if fac.degree("w") > rational and m > 1:
            raise CurveError("ramification profile ambiguous")
        count += fac.degree("w") - rational
    return count


# ---- behaviour over x = infinity --------------------------------------------------------

CHART = PolyRing(("xi", "v"))
EDGE = PolyRing(("w",))


def infinity_chart(F):
    """G(xi, u) = xi^D F(1/xi, u/xi^4) with D the (1,4)-weighted degree of F; numeric F only."""
    ring = F.ring
    xi_, yi = ring.index["x"], ring.index["y"]
    D = max(ring.exponent_of(e, xi_) + 4 * ring.exponent_of(e, yi) for e in F.terms)
    terms = []
    for e, c in F.terms.items():
        i, j = ring.exponent_of(e, xi_), ring.exponent_of(e, yi)
        if any(ring.exponent_of(e, k) for k in range(ring.nvars) if k not in (xi_, yi)):
            raise CurveError("specialize all parameters before the infinity analysis")
        terms.append(((D - i - 4 * j, j), c))
    return CHART.from_terms(terms)


def ramification_at_infinity(F):
    """Ramification indices of the points over x = infinity."""
    G = infinity_chart(F)
    lead = {e[1]: c for e, c in G.items() if e[0] == 0}
    n = F.degree("y")
    if max(lead) != n:
        raise CurveError("points at infinity leave the chart")
    L = EDGE.from_terms(((k,), c) for k, c in lead.items())
    out = []
    for fac, m in squarefree_decomposition(L, "w"):
        if m == 1:
            out.extend([1] * fac.degree("w"))
            continue
        if fac.degree("w") != 1:
            raise CurveError("ramification profile ambiguous")
        u0 = -qq(fac.coeff_monomial((0,))) / qq(fac.coeff_monomial((1,)))
        shifted = G.compose({"xi": CHART.var("xi"), "v": CHART.var("v") + CHART(u0)}, CHART)
        branches = puiseux_indices(shifted)
        if sum(branches) != m:
            raise CurveError("ramification profile ambiguous")
        out.extend(branches)
    return sorted(out)


def puiseux_indices(H, depth=0):
    """Ramification indices of the branches of H(xi, v) = 0 through the origin (v -> 0)."""
    if depth > 40:
        raise CurveError("ramification profile ambiguous")
    pts = {}
    for (j, i), c in H.items():
        pts[(i, j)] = c
    vk = min(i for i, _ in pts)
    out = []
    if vk:
        # v^vk divides H: the branch v = 0 is a component of multiplicity vk
        if vk > 1:
            raise CurveError("non-reduced branch at infinity")
        out.append(1)
        pts = {(i - vk, j): c for (i, j), c in pts.items()}
    axis = [i for i, j in pts if j == 0]
    if not axis:
        raise CurveError("curve contains the line at infinity")
    m = min(axis)
    if m == 0:
        return out
    j0 = min(j for i, j in pts if i == 0)
    cands = [(i, j) for i, j in pts if 0 < i < m]
    hull = _lower_hull(cands, (0, j0), (m, 0))
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        num, den = j1 - j2, i2 - i1
        g = igcd(num, den)
        p, q = num // g, den // g
        edge = {}
        for (i, j), c in pts.items():
            if i1 <= i <= i2 and (j - j1) * den == -(i - i1) * num:
                edge[((i - i1) // q,)] = c
        psi = EDGE.from_terms(edge.items())
        for fac, mult in squarefree_decomposition(psi, "w"):
            if fac.degree("w") == 0:
                continue
            if mult == 1:
                out.extend([q] * fac.degree("w"))
                continue
            if q != 1 or fac.degree("w") != 1:
                raise CurveError("ramification profile ambiguous")
            c0 = -qq(fac.coeff_monomial((0,))) / qq(fac.coeff_monomial((1,)))
            xi = CHART.var("xi")
            sub = H.compose({"xi": xi, "v": xi ** p * (CHART.var("v") + CHART(c0))}, CHART)
            k = j1 + p * i1
            shifted = CHART.from_terms(((e[0] - k, e[1]), c) for e, c in sub.items())
            out.extend(puiseux_indices(shifted, depth + 1))
    return out


def _lower_hull(points, start, end):
    pts = sorted(set(points) | {start, end})
    # points strictly between the end abscissae, plus the two ends
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return [p for p in hull if start[0] <= p[0] <= end[0]]


# ---- cyclic cover xi^6 + c(lambda) = 0 ------------------------------------------------

LAMBDA = PolyRing(("lam",))


def cyclic_cover_data(zh, dh, eh):
    """Components and their genus for xi^6 + zh lam^3 + dh lam^2 + eh lam = 0."""
    c = LAMBDA.from_terms((((3,), zh), ((2,), dh), ((1,), eh)))
    if not c:
        raise CurveError("cubic in lambda vanishes identically")
    deg = c.degree("lam")
    mults = []
    for fac, m in squarefree_decomposition(c, "lam"):
        mults.extend([m] * fac.degree("lam"))
    k = 6
    for m in mults + [deg]:
        k = igcd(k, m)
    chi = 12 - sum(6 - igcd(6, m) for m in mults) - (6 - igcd(6, deg))
    g = 1 - Fraction(chi, 2 * k)
    return {"components": k, "euler_characteristic": chi, "genus": int(g),
            "finite_multiplicities": sorted(mults), "degree": deg}


def cyclic_cover_genus(zh, dh, eh):
    return cyclic_cover_data(zh, dh, eh)["genus"]


# ---- j-invariants ------------------------------------------------------------------

def quartic_invariants(a, b, c, d, e):
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c * c * c
    return I, J


def _is_numeric(x):
    if isinstance(x, RationalFunction):
        return x.is_constant()
    if isinstance(x, MultiPoly):
        return x.is_constant()
    return True


def _as_number(x):
    if isinstance(x, RationalFunction):
        return x.constant_value()
    if isinstance(x, MultiPoly):
        return qq(x.constant_value()) if x else mpq(0)
    return qq(x)


def j_invariant_quartic(coeffs):
    """j of a*X^4 + b*X^3*Y + c*X^2*Y^2 + d*X*Y^3 + e*Y^4 (harmonic 1728, equianharmonic 0)."""
    if isinstance(coeffs, MultiPoly):
        coeffs = binary_quartic_coefficients(coeffs)
    if all(_is_numeric(x) for x in coeffs):
        a, b, c, d, e = (_as_number(x) for x in coeffs)
        I, J = quartic_invariants(a, b, c, d, e)
        disc = 4 * I ** 3 - J ** 2
        if disc == 0:
            raise CurveError("degenerate configuration")
        return 1728 * 4 * I ** 3 / disc
    ring = next(x.ring for x in coeffs if isinstance(x, (MultiPoly, RationalFunction)))
    vals = [RationalFunction.coerce(x, ring) for x in coeffs]
    I, J = quartic_invariants(*vals)
    disc = 4 * I ** 3 - J ** 2
    if not disc:
        raise CurveError("degenerate configuration")
    return (1728 * 4) * I ** 3 / disc


def binary_quartic_coefficients(F, names=None):
    """(a, b, c, d, e) of a form in two variables, as polynomials in the remaining ones."""
    ring = F.ring
    X, Y = names or ring.names[:2]
    xi, yi = ring.index[X], ring.index[Y]
    out = [ring.zero() for _ in range(5)]
    for e, c in F.terms.items():
        i, j = ring.exponent_of(e, xi), ring.exponent_of(e, yi)
        if i + j != 4:
            raise CurveError("not a binary quartic")
        rest = e - (i << ring.shifts[xi]) - (j << ring.shifts[yi])
        out[4 - i] = out[4 - i] + MultiPoly(ring, {rest: c})
    return out


def j_from_cross_ratio(lam):
    lam = qq(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def j_weierstrass(c3, c2, c1, c0):
    """j of Y^2 = c3 X^3 + c2 X^2 + c1 X + c0 through the long Weierstrass invariants."""
    a2, a4, a6 = c2, c1 * c3, c0 * c3 * c3
    b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
    b8 = 4 * a2 * a6 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    delta = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if not delta:
        raise CurveError("singular cubic")
    return c4 ** 3 / delta


class EllipticModel:
    """mu^2 = cubic(lam) over the parameter ring, with its j-invariant."""

    def __init__(self, cubic, j, var="lam", plane_model=None):
        self.cubic = cubic
        self.j = j
        self.var = var
        self.plane_model = plane_model

    def to_dict(self):
        d = {"weierstrass": f"mu^2 = {to_text(self.cubic)}", "j": str(self.j)}
        if self.plane_model is not None:
            d["plane_model"] = to_text(self.plane_model)
        return d


def elliptic_quotient(curve):
    """Elliptic quotient of the a = 0 family on be = ga, ep = be*de, or of the deformed curve."""
    if "a" in curve.poly.variables():
        return _quotient_deformed(curve)
    return _quotient_undeformed(curve)


def _j_two_ways(cubic, var):
    ring = cubic.ring
    cs = [cubic.coeff(var, k) for k in range(4)]
    if cubic.degree(var) != 3:
        raise CurveError("radicand is not a cubic")
    plain = [_strip(c, var) for c in cs]
    j1 = j_invariant_quartic([ring.zero().to_ring(plain[0].ring)] + plain[::-1])
    vals = [RationalFunction(c) for c in plain]
    j2 = j_weierstrass(vals[3], vals[2], vals[1], vals[0])
    if RationalFunction.coerce(j1, plain[0].ring) != j2:
        raise CurveError("Weierstrass reductions disagree")
    return j2


PARAM_RINGS = {}


def _strip(c, var):
    """Move a coefficient free of var into the ring of the remaining variables."""
    names = tuple(n for n in c.ring.names if n not in ("lam", "mu", "s", "t", var))
    ring = PARAM_RINGS.get(names)
    if ring is None:
        ring = PARAM_RINGS[names] = PolyRing(names, tuple(c.ring.weights[c.ring.index[n]] for n in names))
    return c.to_ring(ring)


def _quotient_undeformed(curve):
    coords = curve.coordinates
    if coords is None:
        raise CurveError("curve has no family coordinates")
    al, be, ga, de, ep, ze = (coords[n] for n in FAMILY_PARAMS)
    if be != ga or ep != be * de:
        raise CurveError("curve is not on the stratum be = ga, ep = be*de")
    for label, val in (("ze != 0", ze), ("al - be != 0", al - be), ("de^2 - 4*ze*(al - be) != 0", de * de - 4 * ze * (al - be))):
        if not val:
            raise CurveError(f"degenerate stratum: {label} fails")
    F = curve.poly
    ring = F.ring
    params = tuple(n for n in ring.names if n not in ("x", "y"))
    LM = PolyRing(("lam", "mu") + params, (0, 0) + tuple(ring.weights[ring.index[n]] for n in params))
    xi, yi = ring.index["x"], ring.index["y"]
    beta = be.to_ring(LM)
    lam, mu = LM.var("lam"), LM.var("mu")
    # x^6 F in s = x^3, t = x^2 y; then s = 1/mu, t = (mu^2 - be lam)/(lam mu^2)
    pieces = []
    for e, c in F.terms.items():
        i, j = ring.exponent_of(e, xi) + 6, ring.exponent_of(e, yi)
        if (i - 2 * j) % 3 or i < 2 * j:
            raise CurveError("curve is not invariant under sigma^2")
        rest = MultiPoly(ring, {e - (ring.exponent_of(e, xi) << ring.shifts[xi]) - (j << ring.shifts[yi]): c})
        pieces.append(((i - 2 * j) // 3, j, rest.to_ring(LM)))
    B = max(b for _, b, _ in pieces)
    M = max(a + 2 * b for a, b, _ in pieces)
    E = LM.zero()
    for a, b, c in pieces:
        E = E + c * (mu * mu - beta * lam) ** b * lam ** (B - b) * mu ** (M - a - 2 * b)
    E = _drop_monomial_content(E, ("lam", "mu"))
    if E.degree("mu") != 2 or E.coeff("mu", 1):
        raise CurveError("quotient is not in Weierstrass form")
    lead = E.coeff("mu", 2)
    if lead.variables():
        raise CurveError("quotient is not in Weierstrass form")
    cubic = (-E.coeff("mu", 0)).scale(1 / lead.constant_value())
    j = _j_two_ways(cubic, "lam")
    return EllipticModel(cubic, j, "lam", plane_model=E)


def _drop_monomial_content(E, names):
    ring = E.ring
    idx = [ring.index[n] for n in names]
    low = [min(ring.exponent_of(e, i) for e in E.terms) for i in idx]
    shift = sum(k << ring.shifts[i] for k, i in zip(low, idx))
    return MultiPoly(ring, {e - shift: c for e, c in E.terms.items()})


def deformed_quotient_model(curve):
    """The tau-quotient of the deformed curve in s = x^2, t = y - x^4."""
    F = curve.poly
    ring = F.ring
    shifted = F.subs({"y": ring.var("y") + ring.var("x") ** 4})
    terms = []
    for e, c in shifted.items():
        x, y, h, g, a = e
        if x % 2:
            raise CurveError("curve is not even in x")
        terms.append(((x // 2, y, h, g, a), c))
    return QUOTIENT.from_terms(terms)


def _quotient_deformed(curve):
    P = deformed_quotient_model(curve)
    if P.degree("s") != 2:
        raise CurveError("quotient model is not quadratic in s")
    A, Bc, C = P.coeff("s", 2), P.coeff("s", 1), P.coeff("s", 0)
    D = Bc * Bc - 4 * A * C
    radicand = QUOTIENT.one()
    for fac, m in squarefree_decomposition(D, "t"):
        if m % 2:
            radicand = radicand * fac
    if radicand.degree("t") not in (3, 4):
        raise CurveError("radicand has degree outside 3..4")
    if radicand.degree("t") == 4:
        plain = [_strip(radicand.coeff("t", k), "t") for k in range(5)]
        j = j_invariant_quartic(plain[::-1])
    else:
        j = _j_two_ways(radicand, "t")
    return EllipticModel(radicand, j, "t", plane_model=P)


def ramification_sextic_a(curve):
    """Sextic in z = x^2 cut out by Res_y(F, F_y) for the deformed curve, made primitive."""
    R = resultant_xy(curve.poly)
    ring = PolyRing(("z", "h", "g", "a"), (2, 6, 12, 4))
    terms = []
    for e, c in R.items():
        x, y, h, g, a = e
        if x % 2:
            raise CurveError("odd power of x in the resultant")
        terms.append(((x // 2, h, g, a), c))
    return ring.from_terms(terms).primitive()

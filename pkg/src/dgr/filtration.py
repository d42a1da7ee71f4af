"""Pole-order filtration P(mD), the map to P^5, and the relations of its image."""
import json
import random
from functools import lru_cache

import numpy as np

from .algebra import PolyRing, divexact, format_rational, gcd, mpq, qq, span_solve, to_text
from .algebra.modular import kernel_of_matrix, kernel_rational
from .algebra.poly import divmod_multivariate
from .balances import BalanceError, SeriesEvaluator, principal_balance
from .curves import invariants_on_balance, j_invariant_quartic
from .mechanics import PHASE, dgr_system


class FiltrationError(ArithmeticError):
    pass


# normal forms live here; g2 first so lex division reduces the g2-degree
NORMAL = PolyRing(("g2", "g1", "a", "h", "g"), (4, 1, 4, 6, 12))
PHASE_FIBRE = PHASE.extend(("h", "g"), (6, 12))

PHI_TEXTS = (
    "1",
    "Q",
    "Q*p + 2/3*q*P + 1/3*Q*P",
    "9/2*q*Q^2 - 9/2*Q^3 + P^2",
    "q^2*Q^2 - 1/2*q*Q^3 - 1/2*Q^4 - 2/3*Q*p*P - 2/9*q*P^2 - 1/9*Q*P^2 + Q^2*a",
    "3/2*q*Q^2*p + 2*q^2*Q*P + 1/2*q*Q^2*P - Q^3*P - 1/3*p*P^2 + 1/9*P^3 + Q*P*a",
)
PSI_EXTRA_TEXTS = ("q", "P", "p*P + 3/2*Q^3 + 3/2*q*Q^2 - 3*q^2*Q")
PHI_WEIGHTS = (0, 2, 5, 6, 8, 9)
Z = PolyRing(("z0", "z1", "z2", "z3", "z4", "z5", "h", "g", "a"), (0, 2, 5, 6, 8, 9, 6, 12, 4))
Z_NAMES = Z.names[:6]
# quartic in z1, z4 attached to the eight lines; kept as reference data only
EIGHT_LINES_QUARTIC = "4*g^2*z1^4 + 16*g*h*z1^3*z4 - 12*g*z1^2*z4^2 - 3*z4^4"


def phi_basis(a_symbolic=True):
    """The six generators of P(D) as polynomials of the phase ring (a = 0 drops the a-terms)."""
    out = [PHASE(t) for t in PHI_TEXTS]
    return [f if a_symbolic else f.subs({"a": 0}) for f in out]


def psi_basis(a_symbolic=True):
    """21 products phi_i phi_j (i <= j) followed by q, P and the weight-6 extra element."""
    phi = phi_basis(a_symbolic)
    out = [phi[i] * phi[j] for i in range(6) for j in range(i, 6)]
    return out + [PHASE(t) for t in PSI_EXTRA_TEXTS]


# replaces psi21 = q, which is dependent on the other 23 over Q(h, g, a)
COMPLETION_TEXT = "q*Q^2*P + Q^3*p + 2/27*P^3"


def completed_psi_basis(a_symbolic=True):
    """psi_basis with q replaced by a weight-9 element, giving 24 independent elements of P(2D)."""
    out = psi_basis(a_symbolic)
    out[21] = PHASE(COMPLETION_TEXT)
    return out


def _phase_weight(f):
    return f.weighted_degree()


class FibreNormalForm:
    """Laurent coefficients of polynomials along the balance, reduced on the Painleve curve.

    gamma3 is eliminated through h(gamma) = h and the g2-degree is brought below
    three with g(gamma) = g; two polynomials have equal normal forms iff they
    agree as functions on the divisor over every fibre.
    """

    def __init__(self, balance):
        self.balance = balance
        self.a_symbolic = balance.a_symbolic
        hg, gg = invariants_on_balance(balance)
        lin = hg.coeff("g3", 1)
        if hg.degree("g3") != 1 or not lin.is_constant():
            raise FiltrationError("h(gamma) is not linear in gamma3")
        images = {"g1": NORMAL.var("g1"), "g2": NORMAL.var("g2"), "a": NORMAL.var("a")}
        images["g3"] = NORMAL.zero()
        rest = hg.coeff("g3", 0).compose(images, NORMAL)
        self.g3 = (NORMAL.var("h") - rest).scale(1 / lin.constant_value())
        images["g3"] = self.g3
        self._images = images
        rel = gg.compose(images, NORMAL) - NORMAL.var("g")
        lead = rel.coeff_monomial((3, 0, 0, 0, 0))
        if rel.degree("g2") != 3 or not lead:
            raise FiltrationError("curve relation is not cubic in gamma2")
        self.relation = rel.scale(1 / lead)
        self.evaluator = SeriesEvaluator(balance)
        self._cache = {}

    def reduce(self, c):
        """Normal form of a coefficient polynomial in (g1, g2, g3, a)."""
        return divmod_multivariate(c.compose(self._images, NORMAL), self.relation)[1]

    def monomial_coefficients(self, exps, lowest, highest):
        """Normal forms of the t^k coefficients, lowest <= k <= highest, of a phase monomial."""
        key = (exps, lowest, highest)
        got = self._cache.get(key)
        if got is not None:
            return got
        w = 2 * (exps[0] + exps[1]) + 3 * (exps[2] + exps[3])
        need = highest + w
        if need > self.balance.order:
            raise BalanceError(f"balance order {self.balance.order} too small, need {need}")
        v, cs = self.evaluator.monomial(exps[:4])
        a_pow = NORMAL.var("a") ** exps[4] if len(exps) > 4 and exps[4] else NORMAL.one()
        out = {}
        for k in range(max(lowest, v), highest + 1):
            c = cs[k - v]
            if c:
                nf = self.reduce(c)
                if nf:
                    out[k] = nf * a_pow
        self._cache[key] = out
        return out

    def coefficients(self, f, lowest, highest):
        """Normal forms of the t^k coefficients of f (phase polynomial, optionally with h, g)."""
        acc = {}
        ring = f.ring
        has_hg = "h" in ring.index
        for exps, c in f.items():
            named = dict(zip(ring.names, exps))
            mono = tuple(named.get(n, 0) for n in ("q", "Q", "p", "P", "a"))
            scale = NORMAL.monomial((0, 0, 0, named.get("h", 0), named.get("g", 0)), c) if has_hg \
                else NORMAL(c)
            for k, nf in self.monomial_coefficients(mono, lowest, highest).items():
                acc[k] = acc.get(k, NORMAL.zero()) + nf * scale
        return {k: v for k, v in acc.items() if v}

    def pole_order(self, f):
        """Largest k with a nonzero t^(-k) coefficient in normal form (0 if none)."""
        if not f:
            return 0
        w = max(2 * (e[0] + e[1]) + 3 * (e[2] + e[3]) for e in _phase_exponents(f))
        co = self.coefficients(f, -w, -1)
        return max((-k for k in co), default=0)


def _phase_exponents(f):
    ring = f.ring
    for exps, _ in f.items():
        named = dict(zip(ring.names, exps))
        yield tuple(named.get(n, 0) for n in ("q", "Q", "p", "P", "a"))


@lru_cache(maxsize=None)
def normal_form(a_symbolic=True, order=24):
    return FibreNormalForm(principal_balance(order, a_symbolic))


def pole_order(f, balance=None, a_symbolic=True):
    nf = FibreNormalForm(balance) if balance is not None else normal_form(a_symbolic)
    if not nf.a_symbolic and "a" in f.ring.index:
        f = f.subs({"a": 0})
    return nf.pole_order(f)


# ---- graded pieces and module generators ----------------------------------------------

def phase_monomials(w, a_symbolic):
    mons = PHASE.monomials_of_weight(w)
    if not a_symbolic:
        mons = [m for m in mons if m[4] == 0]
    return sorted(mons, reverse=True)


def coefficient_monomials(w, a_symbolic):
    """Monomials H^i G^j a^k of weight w, as exponent triples (i, j, k)."""
    out = []
    for k in range(w // 4 + 1 if a_symbolic else 1):
        for j in range((w - 4 * k) // 12 + 1):
            r = w - 4 * k - 12 * j
            if r % 6 == 0:
                out.append((r // 6, j, k))
    return out


class _Echelon:
    """Incremental exact row echelon form of sparse vectors (dict index -> mpq)."""

    def __init__(self):
        self.rows = {}

    def reduce(self, v):
        v = dict(v)
        for piv in sorted(self.rows):
            c = v.get(piv)
            if c:
                for j, x in self.rows[piv].items():
                    y = v.get(j, 0) - c * x
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
        return v

    def add(self, v):
        """Insert v; returns False if v is already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        piv = min(v)
        inv = 1 / v[piv]
        v = {j: x * inv for j, x in v.items()}
        for p, row in self.rows.items():
            c = row.get(piv)
            if c:
                for j, x in v.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        self.rows[piv] = v
        return True

    def __len__(self):
        return len(self.rows)


class PoleFiltration:
    """The graded Q[H, G(, a)]-module of polynomials with pole order <= m along the divisor."""

    def __init__(self, m, a_symbolic=True, order=24):
        self.m = m
        self.a_symbolic = a_symbolic
        self.nf = normal_form(a_symbolic, order)
        sysm = dgr_system()
        H, G = sysm.H, sysm.G
        if not a_symbolic:
            H, G = H.subs({"a": 0}), G.subs({"a": 0})
        self.H, self.G = H, G
        self._pieces = {}
        self._powers = {}

    def coefficient_poly(self, ijk):
        got = self._powers.get(ijk)
        if got is None:
            i, j, k = ijk
            got = self._powers[ijk] = self.H ** i * self.G ** j * PHASE.var("a") ** k
        return got

    def piece(self, w):
        """Basis of the weight-w part: polynomials of weight w with pole order <= m."""
        got = self._pieces.get(w)
        if got is not None:
            return got
        mons = phase_monomials(w, self.a_symbolic)
        index = {}
        rows = []
        for col, exps in enumerate(mons):
            for k, nf in self.nf.monomial_coefficients(exps, -w, -self.m - 1).items():
                for e, c in nf.terms.items():
                    r = index.get((k, e))
                    if r is None:
                        r = index[(k, e)] = len(rows)
                        rows.append({})
                    rows[r][col] = c
        kernel = kernel_of_matrix(rows, len(mons)) if rows else \
            [[mpq(int(i == j)) for j in range(len(mons))] for i in range(len(mons))]
        polys = [PHASE.from_terms((mons[j], c) for j, c in enumerate(v) if c) for v in kernel]
        self._pieces[w] = (mons, polys)
        return mons, polys

    def generators(self, weight_cap):
        """Minimal homogeneous generators up to weight_cap, certified free; cap+1 must add none."""
        gens = []
        for w in range(weight_cap + 2):
            mons, polys = self.piece(w)
            col = {m: j for j, m in enumerate(mons)}
            ech = _Echelon()
            count = 0
            for gw, gpoly in gens:
                for ijk in coefficient_monomials(w - gw, self.a_symbolic):
                    v = self.coefficient_poly(ijk) * gpoly
                    count += 1
                    if not ech.add(_vector(v, col)):
                        raise FiltrationError(f"module is not free at weight {w}")
            if len(ech) > len(polys):
                raise FiltrationError(f"multiples exceed the weight-{w} piece")
            fresh = _Echelon()
            for f in polys:
                red = ech.reduce(_vector(f, col))
                if red:
                    fresh.add(red)
            # fully reduce the new generators against the multiples for a canonical choice
            new = []
            for piv in sorted(fresh.rows):
                v = ech.reduce(fresh.rows[piv])
                new.append(PHASE.from_terms((mons[j], c) for j, c in sorted(v.items())))
            if new and w == weight_cap + 1:
                raise FiltrationError("cap too small")
            gens.extend((w, f) for f in new)
        return gens

    def express(self, f, gens):
        """Coefficients c_i(H, G, a) with f = sum c_i gens_i, as polynomials in h, g, a; None if impossible."""
        w = _phase_weight(f) if f else 0
        if not f.is_weighted_homogeneous():
            raise FiltrationError("expression needs a weighted-homogeneous element")
        cands, labels = [], []
        for i, (gw, g) in enumerate(gens):
            for ijk in coefficient_monomials(w - gw, self.a_symbolic):
                cands.append(self.coefficient_poly(ijk) * g)
                labels.append((i, ijk))
        sol = span_solve(f, cands) if cands else None
        if sol is None:
            return None
        coeffs = [HGA.zero() for _ in gens]
        for c, (i, (a, b, k)) in zip(sol, labels):
            if c:
                coeffs[i] = coeffs[i] + HGA.monomial((a, b, k), c)
        return coeffs


HGA = PolyRing(("h", "g", "a"), (6, 12, 4))


def _vector(f, col):
    out = {}
    for exps, c in f.items():
        j = col.get(exps)
        if j is None:
            raise FiltrationError("element outside the graded piece")
        out[j] = qq(c)
    return out


class PoleFiltrationBasis:
    def __init__(self, m, a_symbolic, generators, weight_cap):
        self.m = m
        self.a_symbolic = a_symbolic
        self.generators = generators
        self.weight_cap = weight_cap

    @property
    def dimension(self):
        return len(self.generators)

    @property
    def basis(self):
        return [f for _, f in self.generators]

    def to_dict(self):
        return {"pole": self.m, "a": "sym" if self.a_symbolic else "0", "dimension": self.dimension,
                "weight_cap": self.weight_cap,
                "basis": [{"weight": w, "poly": to_text(f)} for w, f in self.generators]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def filtration_basis(m, weight_cap=None, a_symbolic=True, order=24):
    """Basis of P(mD) over Q(h, g, a): free generators of the pole-order module up to weight_cap."""
    if m < 1:
        raise ValueError("pole bound must be at least 1")
    if weight_cap is None:
        weight_cap = 12 if m == 1 else 18
    filt = _filtration(m, a_symbolic, order)
    return PoleFiltrationBasis(m, a_symbolic, filt.generators(weight_cap), weight_cap)


@lru_cache(maxsize=None)
def _filtration(m, a_symbolic, order=24):
    return PoleFiltration(m, a_symbolic, order)


def same_span(basis, elements):
    """True iff ``elements`` span the same Q(h,g,a)-space as ``basis``.

    Each element is expressed in the free generators; the square coefficient
    matrix must be nonsingular, which we certify by a nonzero determinant at a
    random rational point of (h, g, a).
    """
    if len(elements) != basis.dimension:
        return False
    filt = _filtration(basis.m, basis.a_symbolic)
    rows = []
    for f in elements:
        if not basis.a_symbolic:
            f = f.subs({"a": 0})
        co = filt.express(f, basis.generators)
        if co is None:
            return False
        rows.append(co)
    rng = random.Random(0)
    for _ in range(3):
        pt = {"h": rng.randint(2, 97), "g": rng.randint(2, 97), "a": rng.randint(2, 97)}
        mat = [[qq(c.evaluate(pt)) for c in row] for row in rows]
        if _det(mat) != 0:
            return True
    return False


def _det(mat):
    n = len(mat)
    a = [list(r) for r in mat]
    det = mpq(1)
    for c in range(n):
        k = next((i for i in range(c, n) if a[i][c] != 0), None)
        if k is None:
            return mpq(0)
        if k != c:
            a[c], a[k] = a[k], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


# ---- relations of the image in P^5 -------------------------------------------------

class GradedIdeal:
    """Bihomogeneous generators in z0..z5 with coefficients in Q[h, g, a], keyed by (degree, weight)."""

    def __init__(self, generators, a_symbolic=True, kernels=None):
        self.generators = list(generators)
        self.a_symbolic = a_symbolic
        self.kernels = kernels or {}

    def of_degree(self, d):
        return [f for f in self.generators if _z_degree(f) == d]

    def to_dict(self):
        return {"a": "sym" if self.a_symbolic else "0",
                "generators": [{"degree": _z_degree(f), "weight": f.weighted_degree(), "poly": to_text(f)}
                               for f in self.generators]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _z_degree(f):
    return max(sum(e[:6]) for e, _ in f.items())


def z_monomials(d):
    """Exponent 6-tuples of degree d in z0..z5."""
    out = []

    def rec(i, left, acc):
        if i == 5:
            out.append(tuple(acc + [left]))
            return
        for k in range(left, -1, -1):
            rec(i + 1, left - k, acc + [k])
    rec(0, d, [])
    return out


def _z_weight(beta):
    return sum(w * e for w, e in zip(PHI_WEIGHTS, beta))


class _ImageSampler:
    """Values of z = phi(x), h = H(x), g = G(x) and a at shared random points, mod p or exactly."""

    def __init__(self, a_symbolic, modulo_fibre):
        self.a_symbolic = a_symbolic
        self.modulo_fibre = modulo_fibre
        sysm = dgr_system()
        phi = phi_basis(a_symbolic)
        H, G = sysm.H, sysm.G
        if not a_symbolic:
            H, G = H.subs({"a": 0}), G.subs({"a": 0})
        self.polys = phi + [H, G, PHASE.var("a")]
        self.names = ("q", "Q", "p", "P", "a") if a_symbolic else ("q", "Q", "p", "P")
        self._mod = {}

    def values_mod(self, prime, arrs):
        got = self._mod.get(prime)
        if got is None:
            n = len(next(iter(arrs.values())))
            full = dict(arrs)
            if "a" not in full:
                full["a"] = np.zeros(n, dtype=np.int64)
            got = [f.eval_mod(prime, full, n) % prime for f in self.polys]
            self._mod[prime] = got
        return got

    def exact_values(self, point):
        pt = dict(point)
        pt.setdefault("a", 0)
        return [qq(f.evaluate(pt)) for f in self.polys]


def _column_mod(sampler, zexp, cexp):
    exps = list(zexp) + list(cexp)

    def col(prime, arrs):
        vals = sampler.values_mod(prime, arrs)
        out = np.ones(len(vals[0]), dtype=np.int64)
        for v, e in zip(vals, exps):
            for _ in range(e):
                out = (out * v) % prime
        return out
    return col


def relation_columns(d, weight, a_symbolic, modulo_fibre):
    """Exponent vectors (z-part, (h, g, a)-part) of the bihomogeneous monomials of degree d and given weight."""
    cols = []
    for beta in z_monomials(d):
        gap = weight - _z_weight(beta)
        if gap < 0:
            continue
        if modulo_fibre:
            cs = coefficient_monomials(gap, a_symbolic)
        else:
            cs = [(0, 0, gap // 4)] if gap % 4 == 0 and (a_symbolic or gap == 0) else []
        cols.extend((beta, c) for c in cs)
    return cols


def _relation_kernel(d, weight, a_symbolic, modulo_fibre, seed=0):
    cols = relation_columns(d, weight, a_symbolic, modulo_fibre)
    if not cols:
        return []
    sampler = _ImageSampler(a_symbolic, modulo_fibre)
    rng = random.Random(seed + 7919 * weight + 104729 * d)
    checks = [{n: rng.randint(-10 ** 6, 10 ** 6) for n in sampler.names} for _ in range(2)]
    check_vals = [sampler.exact_values(pt) for pt in checks]

    def certify(v):
        for vals in check_vals:
            s = 0
            for c, (beta, cexp) in zip(v, cols):
                if c:
                    t = c
                    for x, e in zip(vals, list(beta) + list(cexp)):
                        if e:
                            t *= x ** e
                    s += t
            if s:
                return False
        return True

    columns = [_column_mod(sampler, beta, c) for beta, c in cols]
    kernel = kernel_rational(columns, sample_budget=len(cols) + 12, seed=seed + weight,
                             certify=certify, names=sampler.names)
    out = []
    for v in kernel:
        out.append(Z.from_terms((tuple(beta) + tuple(c), x) for x, (beta, c) in zip(v, cols) if x))
    return out


def certify_relation(f, a_symbolic=True):
    """Exact check that f(phi, H, G, a) vanishes identically in q, Q, p, P, a."""
    sampler = _ImageSampler(a_symbolic, True)
    images = dict(zip(Z.names, sampler.polys))
    return not f.compose(images, PHASE)


def image_relations(d, modulo_fibre=True, a_symbolic=True, weight=None, weight_cap=None, lower=None,
                    seed=0, progress=None):
    """Generators of the degree-d relations among phi0..phi5.

    modulo_fibre=False: relations holding identically on C^4 (coefficients in Q[a]).
    modulo_fibre=True: bihomogeneous relations whose coefficients are monomials in
    h, g, a standing for H, G, a; valid on every fibre.  Generators are reported
    modulo h, g, a multiples of lower-weight relations and z-multiples of the
    degree d-1 relations (``lower``, a GradedIdeal of degree d-1 kernels).
    New generators are certified by exact expansion.
    """
    weights = [weight] if weight is not None else range((weight_cap if weight_cap is not None
                                                         else 9 * d + 12) + 1)
    kernels = {}
    gens = []
    for w in weights:
        if progress:
            progress(f"relations degree {d} weight {w}")
        K = _relation_kernel(d, w, a_symbolic, modulo_fibre, seed)
        kernels[w] = K
        if not K:
            continue
        ech = _Echelon()
        index = {}
        for f in _lower_span(d, w, kernels, lower, a_symbolic, modulo_fibre):
            ech.add(_zvector(f, index))
        fresh = _Echelon()
        for f in K:
            red = ech.reduce(_zvector(f, index))
            if red:
                fresh.add(red)
        keys = {j: e for e, j in index.items()}
        for piv in sorted(fresh.rows):
            v = ech.reduce(fresh.rows[piv])
            f = Z.from_terms((keys[j], c) for j, c in v.items())
            f = f.primitive()
            if not certify_relation(f, a_symbolic):
                raise FiltrationError(f"relation at weight {w} failed exact certification")
            gens.append(f)
    return GradedIdeal(gens, a_symbolic, kernels)


def _zvector(f, index):
    out = {}
    for e, c in f.items():
        j = index.get(e)
        if j is None:
            j = index[e] = len(index)
        out[j] = qq(c)
    return out


def _lower_span(d, w, kernels, lower, a_symbolic, modulo_fibre):
    if modulo_fibre:
        for var, vw in (("h", 6), ("g", 12), ("a", 4)):
            if var == "a" and not a_symbolic:
                continue
            for f in kernels.get(w - vw, ()):
                yield f * Z.var(var)
    elif a_symbolic:
        for f in kernels.get(w - 4, ()):
            yield f * Z.var("a")
    if lower is not None:
        for i, zw in enumerate(PHI_WEIGHTS):
            for f in lower.kernels.get(w - zw, ()):
                yield f * Z.var(Z_NAMES[i])


def reference_targets():
    from importlib.resources import files
    return json.loads(files("dgr").joinpath("data/targets.json").read_text())


def reference_relations():
    """The degree-8 hypersurface and the reference cubics and quartics, as Z polynomials."""
    t = reference_targets()
    return (Z(t["reference_octic"]), [Z(s) for s in t["reference_cubics"]],
            [Z(s) for s in t["reference_quartics"]])


def in_relation_span(f, ideal, a_symbolic=True):
    """f lies in the recovered weight slice of its degree (exact span test)."""
    K = ideal.kernels.get(f.weighted_degree(), [])
    return bool(K) and span_solve(f, K) is not None


def fibre_points(count, seed=0, a_symbolic=True):
    """Random points of C^4 with the induced (h, g, a) and z = phi(x); each lies on its own fibre."""
    sampler = _ImageSampler(a_symbolic, True)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        pt = {n: mpq(rng.randint(-50, 50), rng.randint(1, 9)) for n in sampler.names}
        vals = sampler.exact_values(pt)
        out.append(dict(zip(Z.names, vals)))
    return out


def vanishes_on_fibre_points(f, points):
    return all(f.evaluate(pt) == 0 for pt in points)


def slice_rank(polys, values):
    """Rank over Q of the specialized polynomials (h, g, a replaced by numbers)."""
    ech = _Echelon()
    index = {}
    for f in polys:
        ech.add(_zvector(f.subs(values), index))
    return len(ech)


def hilbert_function(generators, d_max=4, seed=0, a_symbolic=True):
    """dim of degree-d forms modulo the ideal at a random specialization of (h, g, a), d = 0..d_max.

    Ranks are computed at two independent specializations; disagreement moves on
    to a fresh pair, and three failures raise.
    """
    rng = random.Random(seed)
    for _ in range(3):
        runs = []
        for _ in range(2):
            vals = {"h": rng.randint(2, 10 ** 4), "g": rng.randint(2, 10 ** 4),
                    "a": rng.randint(2, 10 ** 4) if a_symbolic else 0}
            runs.append(_hilbert_at(generators, d_max, vals))
        if runs[0] == runs[1]:
            return runs[0]
    raise FiltrationError("Hilbert function unstable across specializations")


def _hilbert_at(generators, d_max, vals):
    spec = [(_z_degree(f), f.subs(vals)) for f in generators]
    out = []
    for d in range(d_max + 1):
        polys = []
        for k, f in spec:
            if k <= d:
                for beta in z_monomials(d - k):
                    polys.append(f * Z.monomial(tuple(beta) + (0, 0, 0)))
        ech = _Echelon()
        index = {}
        for f in polys:
            ech.add(_zvector(f, index))
        total = len(z_monomials(d))
        out.append(total - len(ech))
    return out


def hilbert_series_coefficients(numerator=(1, 3, 6, 6, -3, -3, 2), d_max=4):
    """Power-series coefficients of numerator(t) / (1 - t)^3."""
    out = []
    for d in range(d_max + 1):
        out.append(sum(c * (d - i + 2) * (d - i + 1) // 2 for i, c in enumerate(numerator) if i <= d))
    return out


LINE = PolyRing(("z2", "z5", "h", "g", "a"), (5, 9, 6, 12, 4))


class LineSection:
    def __init__(self, quartic, j, contains_p):
        self.quartic = quartic
        self.j = j
        self.contains_p = contains_p

    def to_dict(self):
        j = self.j
        return {"quartic": to_text(self.quartic), "contains_P": self.contains_p,
                "j": j.to_text() if hasattr(j, "to_text") else format_rational(j)}


def line_section(generators, values=None):
    """Restrict generators to L = {z0 = z1 = z3 = z4 = 0}; the gcd cuts out four points on L.

    ``values`` optionally specializes some of h, g, a; the rest stay symbolic.
    Returns the binary quartic in (z2, z5), whether P = (0:1) is among its roots,
    and the j-invariant of the four points.
    """
    images = {n: LINE.zero() for n in ("z0", "z1", "z3", "z4")}
    for n in LINE.names:
        images[n] = LINE(values[n]) if values and n in values else LINE.var(n)
    common = LINE.zero()
    for f in generators:
        r = f.compose(images, LINE)
        if r:
            common = gcd(common, r)
    content = LINE.zero()
    for c in _binary_parts(common).values():
        content = gcd(content, c)
    if content and not content.is_constant():
        common = divexact(common, content)
    parts = _binary_parts(common)
    if {i + k for i, k in parts} != {4}:
        raise FiltrationError("restriction to the line is not a binary quartic")
    coeffs = [parts.get((4 - k, k), LINE.zero()) for k in range(5)]
    if all(c.is_constant() for c in coeffs):
        coeffs = [c.constant_value() if c else mpq(0) for c in coeffs]
    contains_p = not parts.get((0, 4))
    return LineSection(common, j_invariant_quartic(coeffs), contains_p)


def _binary_parts(f):
    """{(deg z2, deg z5): coefficient polynomial in h, g, a}."""
    out = {}
    for e, c in f.items():
        key = (e[0], e[1])
        out[key] = out.get(key, LINE.zero()) + LINE.monomial((0, 0) + tuple(e[2:]), c)
    return out

"""Wronskians, quadratic expressibility over the phi and psi bases, and the critical-value eliminant."""
import json

from .algebra import PolyRing, divexact, gcd, to_text
from .algebra.groebner import elimination_ideal
from .algebra.modular import column_basis, solve_many, solve_with_witness
from .algebra.univariate import squarefree_decomposition
from .filtration import HGA, phi_basis, psi_basis
from .mechanics import PHASE, dgr_system, poisson_bracket


class EliminationError(ArithmeticError):
    pass


PHI_FAILING_PAIRS = ((0, 1), (0, 3), (0, 4), (1, 4), (2, 5), (3, 4), (4, 5))
DENOMINATOR_TEXTS = ("g", "3*h^2 + 2*g", "2*a^3 + 9*g", "4*a^3 + 27*h^2 + 18*g")


def _system(a_symbolic):
    s = dgr_system()
    return s if a_symbolic else s.at(0)


class WronskianTable:
    """W^F_{i,j} = {F, b_i} b_j - {F, b_j} b_i for i < j."""

    def __init__(self, basis, F, name):
        self.basis = basis
        self.F = F
        self.name = name
        flows = [poisson_bracket(F, b) for b in basis]
        self.entries = {}
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                self.entries[(i, j)] = flows[i] * basis[j] - flows[j] * basis[i]

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return PHASE.zero()
        if i > j:
            return -self.entries[(j, i)]
        return self.entries[(i, j)]

    def weight(self, i, j):
        return self.basis[i].weighted_degree() + self.basis[j].weighted_degree() + \
            self.F.weighted_degree() - 5


def wronskians(basis, F="H", a_symbolic=False):
    """All Wronskians of the basis for F in {"H", "G"} (or an explicit polynomial)."""
    sysm = _system(a_symbolic)
    if isinstance(F, str):
        name, F = F, {"H": sysm.H, "G": sysm.G}[F]
    else:
        name = "F"
    return WronskianTable(basis, F, name)


class ExpressibilityCertificate:
    """Per pair: (denominator, {(k, l): coefficient in h, g, a}) or None when infeasible."""

    def __init__(self, name, results, witnesses):
        self.name = name
        self.results = results
        self.witnesses = witnesses

    @property
    def failing_pairs(self):
        return sorted(ij for ij, r in self.results.items() if r is None)

    @property
    def denominators(self):
        return sorted({to_text(r[0]) for r in self.results.values() if r is not None})

    def to_dict(self):
        table = {}
        for (i, j), r in sorted(self.results.items()):
            if r is None:
                table[f"{i},{j}"] = None
                continue
            den, co = r
            table[f"{i},{j}"] = {"denominator": to_text(den),
                                 "coefficients": {f"{k},{l}": to_text(c) for (k, l), c in sorted(co.items())}}
        return {"F": self.name, "failing_pairs": [list(p) for p in self.failing_pairs], "pairs": table}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


class _QuadraticSpan:
    """Weight-graded spanning sets of {H^i G^j a^k b_k b_l} with exact coordinates in phase monomials."""

    def __init__(self, basis, H, G, a_symbolic):
        self.basis = basis
        self.H, self.G = H, G
        self.a_symbolic = a_symbolic
        self.products = {}
        for k in range(len(basis)):
            for l in range(k, len(basis)):
                f = basis[k] * basis[l]
                if f:
                    self.products.setdefault(f.weighted_degree(), []).append(((k, l), f))
        self._pieces = {}

    def piece(self, w):
        """(labels, polys, pivots): a column basis of the weight-w part and the provenance of each column."""
        got = self._pieces.get(w)
        if got is not None:
            return got
        labels, polys = [], []
        for kl, f in self.products.get(w, ()):
            labels.append((kl, (0, 0, 0)))
            polys.append(f)
        for var, vw, mult in (("h", 6, self.H), ("g", 12, self.G), ("a", 4, PHASE.var("a"))):
            if var == "a" and not self.a_symbolic:
                continue
            if w - vw < 0:
                continue
            sub_labels, sub_polys = self.piece(w - vw)
            for (kl, (i, j, k)), f in zip(sub_labels, sub_polys):
                e = (i + (var == "h"), j + (var == "g"), k + (var == "a"))
                labels.append((kl, e))
                polys.append(f * mult)
        # keep a column basis only
        if polys:
            index, rows = _rows(polys)
            piv = column_basis(rows, len(polys))
            labels = [labels[j] for j in piv]
            polys = [polys[j] for j in piv]
        self._pieces[w] = (labels, polys)
        return labels, polys


def _rows(polys, extra=()):
    index = {}
    rows = []
    for j, f in enumerate(list(polys) + list(extra)):
        for e, c in f.terms.items():
            r = index.get(e)
            if r is None:
                r = index[e] = len(rows)
                rows.append({})
            rows[r][j] = c
    return index, rows


def _denominators(a_symbolic):
    out = [HGA.one()]
    base = [HGA(t) for t in DENOMINATOR_TEXTS]
    if not a_symbolic:
        base = [d.subs({"a": 0}) for d in base[:2]]
    for d in base:
        out.append(d)
    for d in base:
        out.append(d * d)
    return out


def _substitute_hga(d, H, G):
    return d.compose({"h": H, "g": G, "a": PHASE.var("a")}, PHASE)


def quadratic_expressibility(table, basis=None, a_symbolic=False, denominators=None, progress=None):
    """Decide d(H,G,a) W = sum c_kl(H,G,a) b_k b_l for every Wronskian in the table.

    Denominators d are tried in order (1 first).  Solutions are exact: the linear
    system is the coefficient identity in Q[q,Q,p,P,a], solved over Q and
    re-verified by expansion.  Infeasible pairs carry a witness vector.
    """
    basis = table.basis if basis is None else basis
    sysm = _system(a_symbolic)
    span = _QuadraticSpan(basis, sysm.H, sysm.G, a_symbolic)
    dens = _denominators(a_symbolic) if denominators is None else [HGA.one()] + list(denominators)
    pending = {ij: W for ij, W in table.entries.items()}
    results = {}
    witnesses = {}
    for den in dens:
        if not pending:
            break
        dpoly = _substitute_hga(den, sysm.H, sysm.G) if not den.is_constant() else PHASE.one()
        by_weight = {}
        for ij, W in pending.items():
            if not W:
                results[ij] = (den, {})
                continue
            target = W * dpoly
            by_weight.setdefault(target.weighted_degree(), []).append((ij, target))
        for w in sorted(by_weight):
            if progress:
                progress(f"Wronskians {table.name} weight {w} denominator {to_text(den)}")
            labels, polys = span.piece(w)
            group = by_weight[w]
            sols = _solve_group(polys, [t for _, t in group])
            for (ij, target), sol in zip(group, sols):
                if sol is None:
                    continue
                acc = PHASE.zero()
                co = {}
                for c, (kl, e), f in zip(sol, labels, polys):
                    if c:
                        acc = acc + f.scale(c)
                        co[kl] = co.get(kl, HGA.zero()) + HGA.monomial(e, c)
                if acc != target:
                    raise ArithmeticError(f"expressibility identity for {ij} failed on expansion")
                results[ij] = (den, {kl: c for kl, c in co.items() if c})
        pending = {ij: W for ij, W in pending.items() if ij not in results}
    for ij, W in pending.items():
        results[ij] = None
        witnesses[ij] = _witness(span, W)
    return ExpressibilityCertificate(table.name, results, witnesses)


def _solve_group(polys, targets):
    index = {}
    rows = []
    for j, f in enumerate(polys):
        for e, c in f.terms.items():
            r = index.get(e)
            if r is None:
                r = index[e] = len(rows)
                rows.append({})
            rows[r][j] = c
    out = [None] * len(targets)
    rhs_list = []
    live = []
    for t_i, t in enumerate(targets):
        if any(e not in index for e in t.terms):
            continue
        vec = [0] * len(rows)
        for e, c in t.terms.items():
            vec[index[e]] = c
        rhs_list.append(vec)
        live.append(t_i)
    if not live or not polys:
        return out
    sols = solve_many(rows, len(polys), rhs_list)
    for t_i, s in zip(live, sols):
        out[t_i] = s
    return out


def _witness(span, W):
    """A left-kernel vector y with y.A = 0 and y.b != 0 for the undenominated system (or a missing monomial)."""
    labels, polys = span.piece(W.weighted_degree())
    index, rows = _rows(polys)
    missing = [e for e in W.terms if e not in index]
    if missing:
        return {"monomial_outside_span": to_text(PHASE.from_terms([(PHASE.unpack(missing[0]), 1)]))}
    rhs = [0] * len(rows)
    for e, c in W.terms.items():
        rhs[index[e]] = c
    x, y = solve_with_witness(rows, rhs, len(polys))
    if x is not None:
        raise ArithmeticError("witness requested for a feasible system")
    return {"left_kernel_vector_size": len(y)}


def expressibility_phi(F="H", a_symbolic=False, **kw):
    basis = phi_basis(a_symbolic)
    return quadratic_expressibility(wronskians(basis, F, a_symbolic), a_symbolic=a_symbolic, **kw)


def expressibility_psi(F="H", a_symbolic=False, basis=None, **kw):
    basis = psi_basis(a_symbolic) if basis is None else basis
    return quadratic_expressibility(wronskians(basis, F, a_symbolic), a_symbolic=a_symbolic, **kw)


# ---- critical values of the moment map --------------------------------------------

ELIMINATION = PolyRing(("q", "Q", "p", "P", "l", "h", "g", "a"), (2, 2, 3, 3, 6, 6, 12, 4))
EXPECTED_FACTORS = {"zero": ("3*h^2 + 2*g", "g"),
                 "symbolic": ("4*a^3 + 27*h^2 + 18*g", "2*a^3 + 9*g", "3*h^2 + 2*g", "g")}


class EliminantReport:
    """R(h, g[, a]) with the exact quotient by each expected factor and the cofactor left over."""

    def __init__(self, a_mode, R, divisibility, extraneous):
        self.a_mode = a_mode
        self.R = R
        self.divisibility = divisibility
        self.extraneous = extraneous

    @property
    def all_divide(self):
        return all(q is not None for q in self.divisibility.values())

    @property
    def origin_is_root(self):
        return self.R.constant_term() == 0

    @property
    def weighted_homogeneous(self):
        return self.R.is_weighted_homogeneous()

    def to_dict(self):
        return {"a": self.a_mode, "eliminant": to_text(self.R),
                "divides": {f: q is not None for f, q in self.divisibility.items()},
                "quotients": {f: (to_text(q) if q is not None else None)
                              for f, q in self.divisibility.items()},
                "possibly_extraneous": to_text(self.extraneous),
                "origin_is_root": self.origin_is_root,
                "weighted_homogeneous": self.weighted_homogeneous}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def critical_value_eliminant(a_mode="zero", progress=None):
    """Eliminant of the critical values of (H, G).

    The critical locus is {dG = l dH}; together with H = h and G = g the phase
    variables and l are eliminated by a Groebner basis in a block order, and the
    generator of the elimination ideal in Q[h, g(, a)] is returned squarefree.
    Points where dH = 0 map to isolated critical values and do not contribute a
    curve.  Each expected factor is checked by exact division.
    """
    if a_mode not in ("zero", "symbolic"):
        raise ValueError("a_mode is 'zero' or 'symbolic'")
    sysm = _system(a_mode == "symbolic")
    R = ELIMINATION
    img = {n: R.var(n) for n in ("q", "Q", "p", "P", "a")}
    H, G = sysm.H.compose(img, R), sysm.G.compose(img, R)
    eqs = [G.diff(x) - R.var("l") * H.diff(x) for x in ("q", "Q", "p", "P")]
    eqs += [H - R.var("h"), G - R.var("g")]
    gens = elimination_ideal(eqs, 5, progress=progress)
    if not gens:
        raise EliminationError("elimination ideal is zero")
    images = {n: HGA.zero() for n in R.names[:5]}
    images.update({n: HGA.var(n) for n in ("h", "g", "a")})
    gens = [f.compose(images, HGA) for f in gens]
    elim = gens[0]
    for f in gens[1:]:
        elim = gcd(elim, f)
    elim = _squarefree(elim).primitive()
    divisibility = {}
    rest = elim
    for text in EXPECTED_FACTORS[a_mode]:
        fac = HGA(text)
        try:
            divisibility[text] = divexact(elim, fac)
        except ValueError:
            divisibility[text] = None
            continue
        rest = divexact(rest, fac)
    return EliminantReport(a_mode, elim, divisibility, rest)


def _squarefree(f):
    """Product of the distinct irreducible-up-to-squarefree factors of f, over all variables."""
    if f.is_constant():
        return f
    var = next(v for v in ("g", "h", "a") if f.degree(v) > 0)
    out = HGA.one()
    prim = HGA.one()
    for fac, _ in squarefree_decomposition(f, var):
        out = out * fac
        prim = prim * fac ** _
    content = divexact(f, prim)
    return out * _squarefree(content)

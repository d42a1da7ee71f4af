"""Kovalevskaya analysis of the DGR flow: initial locus, exponents, Laurent balances."""
import json
from fractions import Fraction
from functools import lru_cache

from .algebra import MultiPoly, PolyRing, mpq, qq, resultant, rho_power
from .algebra.univariate import gcd, rational_roots, root_multiplicity, to_dense
from .mechanics import PHASE, dgr_system, poisson_bracket

PHASE_VARS = ("q", "Q", "p", "P")
LEADING_ORDERS = {"q": 2, "Q": 2, "p": 3, "P": 3}

# parameters of the principal balance: gamma_k carries weight k's resonance order
SERIES = PolyRing(("g1", "g2", "g3", "a"), (1, 4, 6, 4))

# resonance -> (component pinned, its value in units of the new parameter)
RESONANCE_NORMALIZATION = {1: ("Q", 4, "g1"), 4: ("Q", -1, "g2"), 6: ("q", 1, "g3")}


class BalanceError(ArithmeticError):
    pass


class InitialPoint:
    """Leading coefficients of a Laurent solution x = x0 / t^w."""

    def __init__(self, values, name=None):
        self.values = {k: qq(values[k]) for k in PHASE_VARS}
        self.name = name
        self.orders = dict(LEADING_ORDERS)

    def as_tuple(self):
        return tuple(self.values[k] for k in PHASE_VARS)

    def is_origin(self):
        return not any(self.as_tuple())

    def __eq__(self, other):
        return isinstance(other, InitialPoint) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        vals = ", ".join(f"{k}={self.values[k]}" for k in PHASE_VARS)
        return f"InitialPoint({self.name or ''}: {vals})"

    def to_dict(self):
        return {"name": self.name, **{k: str(v) for k, v in self.values.items()}}


# ---- the weighted vector field ----------------------------------------------------

@lru_cache(maxsize=None)
def vector_field():
    """x' = {H, x} for the four phase variables, a kept symbolic."""
    H = dgr_system().H
    return {x: poisson_bracket(H, PHASE.var(x)) for x in PHASE_VARS}


def indicial_equations():
    """-w_x * x0 = f_x(x0) restricted to the leading (a-free) part of the field."""
    ring = PolyRing(PHASE_VARS)
    out = []
    for x, f in vector_field().items():
        eq = f.subs({"a": 0}).to_ring(ring) + ring.var(x).scale(LEADING_ORDERS[x])
        out.append(eq)
    return out


def solve_polynomial_system(eqs, names):
    """All rational solutions of a zero-dimensional system, by resultants and back-substitution.

    Returns (solutions, residuals): solutions are dicts name -> rational and
    residuals lists univariate factors whose roots are not rational.
    """
    eqs = [e for e in eqs if e]
    if not names:
        if any(not e.is_constant() for e in eqs) or any(e for e in eqs):
            return [], []
        return [{}], []
    v = names[0]
    rest = names[1:]
    with_v = [e for e in eqs if e.degree(v) > 0]
    without = [e for e in eqs if e.degree(v) <= 0]
    if with_v:
        pivot = min(with_v, key=lambda e: (e.degree(v), len(e)))
        reduced = list(without)
        for e in with_v:
            if e is not pivot:
                r = resultant(pivot, e, v)
                if r:
                    reduced.append(r)
        if not rest:
            reduced = [e for e in reduced if e]
    else:
        reduced = without
    partial, residuals = solve_polynomial_system(reduced, rest) if rest else (
        ([{}], []) if all(not e for e in reduced) or not reduced else ([], []))
    out = []
    for sol in partial:
        subs = [e.subs(sol) for e in eqs]
        if any(e.is_constant() and e for e in subs):
            continue
        uni = None
        for e in subs:
            if e:
                uni = e if uni is None else gcd(uni, e)
        if uni is None:
            raise BalanceError(f"positive-dimensional solution set in {v}")
        coeffs = [c.constant_value() for c in to_dense(uni, v)]
        roots = rational_roots(coeffs)
        for r in roots:
            out.append({**sol, v: mpq(r.numerator, r.denominator)})
        # strip the rational roots and keep what is left as a residual factor
        left = coeffs
        for r in roots:
            for _ in range(root_multiplicity(left, r)):
                left = _deflate(left, r)
        if len(left) > 1:
            residuals.append(left)
    return out, residuals


def _deflate(coeffs, r):
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + Fraction(int(qq(coeffs[i]).numerator), int(qq(coeffs[i]).denominator))
        out[i - 1] = acc
    return [mpq(c.numerator, c.denominator) for c in out]


POINT_NAMES = {
    (-4, 4, 8, 24): "I1",
    (-18, -24, 36, -144): "I2",
    (-2, 0, 4, 0): "I3",
    (0, 0, 0, 0): "origin",
}


def initial_locus(a_symbolic=False):
    """Solutions of the indicial system.

    The indicial system only sees the weighted-leading part of the field, so
    it does not depend on a; with a_symbolic=True that independence is checked.
    """
    if a_symbolic:
        for x, f in vector_field().items():
            lead = {e: c for e, c in f.terms.items()
                    if PHASE.weight_of(e) - 4 * PHASE.exponent_of(e, 4) == LEADING_ORDERS[x] + 1}
            if any(PHASE.exponent_of(e, 4) for e in lead):
                raise BalanceError("a enters the leading part of the field")
    eqs = indicial_equations()
    sols, residuals = solve_polynomial_system(eqs, list(PHASE_VARS))
    if residuals:
        raise BalanceError(f"non-rational indicial component: {residuals}")
    points = []
    for s in sols:
        key = tuple(int(s[k]) if s[k].denominator == 1 else s[k] for k in PHASE_VARS)
        points.append(InitialPoint(s, POINT_NAMES.get(key)))
    order = {"I1": 0, "I2": 1, "I3": 2, "origin": 3}
    points.sort(key=lambda pt: (order.get(pt.name, 4), pt.as_tuple()))
    return points


def initial_point(name):
    for pt in initial_locus():
        if pt.name == name:
            return pt
    raise KeyError(name)


# ---- Kovalevskaya matrix --------------------------------------------------------

def kovalevskaya_matrix(point):
    """K = Jacobian of the leading field at the point + diag(leading orders)."""
    field = vector_field()
    vals = {**point.values, "a": 0}
    K = []
    for x in PHASE_VARS:
        row = []
        for y in PHASE_VARS:
            d = field[x].diff(y).evaluate(vals)
            row.append(Fraction(int(d.numerator), int(d.denominator)))
        K.append(row)
    for i, x in enumerate(PHASE_VARS):
        K[i][i] += LEADING_ORDERS[x]
    return K


def charpoly(M):
    """Characteristic polynomial det(x*I - M) as coefficients c0..cn (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = M * (Mk_prev + c_{n-k+1} I)
        prev = [[Mk[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(Mk[i][i] for i in range(n)) / k
    return coeffs


class KovalevskayaData:
    def __init__(self, matrix, exponents, unsolved):
        self.matrix = matrix
        self.exponents = exponents
        self.unsolved = unsolved

    @property
    def resonances(self):
        return sorted({e for e in self.exponents if e > 0 and e.denominator == 1})

    def to_dict(self):
        return {
            "matrix": [[str(x) for x in row] for row in self.matrix],
            "exponents": [str(e) for e in self.exponents],
            "unsolved": [[str(c) for c in f] for f in self.unsolved],
        }


def kovalevskaya_data(point):
    if point.is_origin():
        raise BalanceError("the origin carries no balance")
    K = kovalevskaya_matrix(point)
    cp = charpoly(K)
    roots = rational_roots(cp)
    exps = []
    left = [mpq(c.numerator, c.denominator) for c in cp]
    for r in roots:
        m = root_multiplicity(cp, r)
        exps.extend([r] * m)
        for _ in range(m):
            left = _deflate(left, r)
    unsolved = [left] if len(left) > 1 else []
    return KovalevskayaData(K, sorted(exps, reverse=True), unsolved)


def kovalevskaya_exponents(point):
    """Eigenvalues of the Kovalevskaya matrix, as a multiset (descending list)."""
    return kovalevskaya_data(point).exponents


# ---- Laurent series -------------------------------------------------------------

class TruncatedLaurentSeries:
    """sum_k coeffs[k] * t^(valuation + k), exact for exponents <= valuation + len(coeffs) - 1."""

    def __init__(self, valuation, coeffs, ring=SERIES):
        self.valuation = valuation
        self.coeffs = list(coeffs)
        self.ring = ring

    @property
    def top(self):
        """Largest exponent with a certified coefficient."""
        return self.valuation + len(self.coeffs) - 1

    def coefficient(self, power):
        k = power - self.valuation
        if k < 0:
            return self.ring.zero()
        if k >= len(self.coeffs):
            raise IndexError(f"t^{power} is beyond the truncation t^{self.top}")
        return self.coeffs[k]

    def terms(self):
        return [(self.valuation + k, c) for k, c in enumerate(self.coeffs) if c]

    def truncate(self, top):
        n = top - self.valuation + 1
        return TruncatedLaurentSeries(self.valuation, self.coeffs[:max(n, 0)], self.ring)

    def map(self, fn):
        return TruncatedLaurentSeries(self.valuation, [fn(c) for c in self.coeffs], self.ring)

    def __eq__(self, other):
        return (self.valuation, self.coeffs) == (other.valuation, other.coeffs)

    def to_list(self):
        return [[p, str(c)] for p, c in self.terms()]

    def __repr__(self):
        shown = " + ".join(f"({c})*t^{p}" for p, c in self.terms()[:4])
        return f"TruncatedLaurentSeries({shown} + ... up to t^{self.top})"


class PrincipalBalance:
    def __init__(self, point, series, order, a_symbolic):
        self.point = point
        self.series = series
        self.order = order
        self.a_symbolic = a_symbolic

    def __getitem__(self, name):
        return self.series[name]

    def at_a(self, a):
        return PrincipalBalance(
            self.point, {k: s.map(lambda c: c.subs({"a": a})) for k, s in self.series.items()},
            self.order, False)

    def truncate(self, order):
        return PrincipalBalance(
            self.point,
            {k: TruncatedLaurentSeries(s.valuation, s.coeffs[:order + 1]) for k, s in self.series.items()},
            order, self.a_symbolic)

    def to_dict(self):
        return {
            "initial_point": self.point.to_dict(),
            "order": self.order,
            "a": "symbolic" if self.a_symbolic else "0",
            "series": {k: self.series[k].to_list() for k in PHASE_VARS},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _field_terms():
    """Each component of the field as (coefficient in SERIES, variable tuple, index shift)."""
    out = {}
    for x, f in vector_field().items():
        terms = []
        for exps, c in f.items():
            vars_ = []
            for name, k in zip(PHASE.names[:4], exps[:4]):
                vars_.extend([name] * k)
            ka = exps[4]
            coeff = SERIES.monomial((0, 0, 0, ka), c)
            terms.append((coeff, tuple(vars_), 4 * ka))
        out[x] = terms
    return out


class _ProductCache:
    """Relative coefficients of products of the series.

    Entries with index <= ``final`` no longer change and are memoised.
    """

    def __init__(self, coeffs):
        self.coeffs = coeffs  # name -> list of relative coefficients
        self.cache = {}

    def get(self, vars_, k, final):
        if not vars_:
            return SERIES.one() if k == 0 else SERIES.zero()
        if len(vars_) == 1:
            lst = self.coeffs[vars_[0]]
            return lst[k] if k < len(lst) else SERIES.zero()
        memo = self.cache.setdefault(vars_, {})
        if k <= final and k in memo:
            return memo[k]
        head, tail = vars_[0], vars_[1:]
        lst = self.coeffs[head]
        acc = SERIES.zero()
        for i in range(min(k, len(lst) - 1) + 1):
            ci = lst[i]
            if ci:
                rest = self.get(tail, k - i, final)
                if rest:
                    acc = acc + ci * rest
        if k <= final:
            memo[k] = acc
        return acc


def _solve_rational(M, rhs):
    """Solve M c = rhs (M rational and invertible, rhs SERIES polynomials)."""
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        k = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[k] = A[k], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    inv = [row[n:] for row in A]
    out = []
    for i in range(n):
        acc = SERIES.zero()
        for j in range(n):
            if inv[i][j] != 0 and rhs[j]:
                acc = acc + rhs[j].scale(mpq(inv[i][j].numerator, inv[i][j].denominator))
        out.append(acc)
    return out


def solve_balance(point, order=24, a_symbolic=True, normalization=None):
    """Laurent solution through relative order ``order`` around a principal initial point.

    At each k, (K - k) c_k = -R_k; at a resonance one component of c_k is
    pinned to (value * new parameter) as given by ``normalization``.
    """
    data = kovalevskaya_data(point)
    positive = [e for e in data.exponents if e > 0 and e.denominator == 1]
    if len(positive) != 3 or data.unsolved:
        raise BalanceError(f"{point.name or point} is not a principal balance point")
    resonances = sorted(int(e) for e in positive)
    if len(set(resonances)) != 3:
        raise BalanceError("repeated resonance")
    if normalization is None:
        normalization = RESONANCE_NORMALIZATION if resonances == [1, 4, 6] else {}
    K = data.matrix
    idx = {x: i for i, x in enumerate(PHASE_VARS)}
    terms = _field_terms()
    if not a_symbolic:
        terms = {x: [(c.subs({"a": 0}), v, s) for c, v, s in ts if c.subs({"a": 0})]
                 for x, ts in terms.items()}
    coeffs = {x: [SERIES(point.values[x])] for x in PHASE_VARS}
    cache = _ProductCache(coeffs)
    params = iter(("g1", "g2", "g3"))
    for k in range(1, order + 1):
        for x in PHASE_VARS:
            coeffs[x].append(SERIES.zero())
        R = []
        for x in PHASE_VARS:
            acc = SERIES.zero()
            for coeff, vars_, shift in terms[x]:
                j = k - shift
                if j < 0:
                    continue
                v = cache.get(vars_, j, k - 1)
                if v:
                    acc = acc + coeff * v
            R.append(acc)
        neg_R = [-r for r in R]
        M = [[K[i][j] - (k if i == j else 0) for j in range(4)] for i in range(4)]
        if k in resonances:
            if k in normalization:
                comp, scale, pname = normalization[k]
            else:
                pname = next(params)
                comp, scale = None, 1
            sol = _solve_resonant(M, neg_R, comp, scale, pname, k)
        else:
            sol = _solve_rational(M, neg_R)
        for x in PHASE_VARS:
            coeffs[x][k] = sol[idx[x]]
    series = {x: TruncatedLaurentSeries(-LEADING_ORDERS[x], coeffs[x]) for x in PHASE_VARS}
    return PrincipalBalance(point, series, order, a_symbolic)


def _solve_resonant(M, rhs, comp, scale, pname, k):
    """Solve the singular system with one component pinned; checks compatibility."""
    n = len(M)
    ci = PHASE_VARS.index(comp) if comp else None
    # kernel vector of M
    ker = _rational_kernel(M)
    if len(ker) != 1:
        raise BalanceError(f"resonance at {k} has a kernel of dimension {len(ker)}")
    v = ker[0]
    if ci is None:
        ci = next(i for i in range(n) if v[i] != 0)
        scale = v[ci]
    if v[ci] == 0:
        raise BalanceError(f"cannot pin component {comp} at resonance {k}")
    # replace a dependent row by the pin c[ci] = 0, solve for the particular part
    for drop in range(n):
        rows = [M[i] for i in range(n) if i != drop] + [[Fraction(int(j == ci)) for j in range(n)]]
        if _det(rows) != 0:
            break
    else:
        raise BalanceError("no independent row set")
    rhs2 = [rhs[i] for i in range(n) if i != drop] + [SERIES.zero()]
    part = _solve_rational(rows, rhs2)
    # compatibility of the dropped equation
    check = -rhs[drop]
    for j in range(n):
        if part[j] and M[drop][j] != 0:
            check = check + part[j].scale(mpq(M[drop][j].numerator, M[drop][j].denominator))
    if check:
        raise BalanceError(f"balance obstructed at order {k}")
    gamma = SERIES.var(pname).scale(qq(scale) / mpq(v[ci].numerator, v[ci].denominator))
    return [part[j] + gamma.scale(mpq(v[j].numerator, v[j].denominator)) for j in range(n)]


def _det(M):
    n = len(M)
    A = [list(r) for r in M]
    d = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c] != 0), None)
        if k is None:
            return Fraction(0)
        if k != c:
            A[c], A[k] = A[k], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def _rational_kernel(M):
    from .algebra import kernel_exact
    return kernel_exact(M, len(M[0]))


@lru_cache(maxsize=None)
def principal_balance(order=24, a_symbolic=True):
    return solve_balance(initial_point("I3"), order, a_symbolic)


# ---- series evaluation of polynomials ------------------------------------------------

class SeriesEvaluator:
    """Substitute a balance into polynomials of the phase ring, caching monomial series."""

    def __init__(self, balance):
        self.balance = balance
        self.N = balance.order
        self._mono = {}
        self._a = SERIES.var("a")

    def _var_series(self, name):
        s = self.balance.series[name]
        return (s.valuation, s.coeffs)

    def monomial(self, exps):
        """(valuation, relative coefficients) of q^i Q^j p^k P^l."""
        exps = tuple(exps[:4])
        got = self._mono.get(exps)
        if got is not None:
            return got
        if not any(exps):
            res = (0, [SERIES.one()] + [SERIES.zero()] * self.N)
        else:
            i = next(j for j in range(4) if exps[j])
            rest = list(exps)
            rest[i] -= 1
            v1, c1 = self.monomial(tuple(rest))
            v2, c2 = self._var_series(PHASE_VARS[i])
            n = self.N + 1
            out = []
            for k in range(n):
                acc = SERIES.zero()
                for j in range(k + 1):
                    x, y = c1[j], c2[k - j]
                    if x and y:
                        acc = acc + x * y
                out.append(acc)
            res = (v1 + v2, out)
        self._mono[exps] = res
        return res

    def evaluate(self, f):
        """Series of f (a polynomial in q,Q,p,P and a) as a TruncatedLaurentSeries.

        Coefficients are certified through t^(N - W), W the largest phase weight in f.
        """
        if not f:
            return TruncatedLaurentSeries(0, [])
        W = max(2 * (e[0] + e[1]) + 3 * (e[2] + e[3]) for e, _ in f.items())
        top = self.N - W
        low = -W
        acc = [SERIES.zero() for _ in range(top - low + 1)]
        for exps, c in f.items():
            v, cs = self.monomial(exps)
            coeff = SERIES.monomial((0, 0, 0, exps[4] if len(exps) > 4 else 0), c)
            for k, ck in enumerate(cs):
                pw = v + k
                if pw > top:
                    break
                if ck:
                    acc[pw - low] = acc[pw - low] + coeff * ck
        # drop leading zeros
        start = 0
        while start < len(acc) - 1 and not acc[start]:
            start += 1
        return TruncatedLaurentSeries(low + start, acc[start:])


def sigma_on_series_ring(c, power=1):
    """gamma_k -> rho^k gamma_k (weights 1, 4, 6); a is left alone (the action needs a = 0)."""
    d = {}
    for e, v in c.terms.items():
        g1, g2, g3, a = SERIES.unpack(e)
        k = (power * (g1 + 4 * g2 + 6 * g3)) % 6
        val = v if k == 0 else rho_power(k) * v
        d[e] = val
    return MultiPoly(SERIES, d)


def check_equivariance(balance):
    """sigma(x(t)) = x(sigma t) coefficientwise at a = 0.

    With t -> rho^5 t and gamma_k -> rho^k gamma_k, the coefficient of t^m in
    the series of a variable of weight w must scale by rho^(w) * rho^(-5m).
    """
    weights = {"q": 2, "Q": 2, "p": 3, "P": 3}
    for x, s in balance.series.items():
        for m, c in s.terms():
            c0 = c.subs({"a": 0})
            lhs = sigma_on_series_ring(c0)
            rhs = c0 * rho_power(weights[x] - 5 * m)
            if lhs != rhs:
                return False
    return True

"""Sparse multivariate polynomials over Q or Q(rho).

Exponent vectors are packed into a single Python int, 16 bits per variable,
first variable in the most significant field, so integer comparison of packed
exponents is lexicographic order.  Exponents must stay below 2**15.
"""
import heapq
import re
from functools import lru_cache

import numpy as np

from .scalars import QRho, format_rational, mpq, qq

BITS = 16
MASK = (1 << BITS) - 1
MAX_EXPONENT = (1 << (BITS - 1)) - 1


class ExponentOverflow(ArithmeticError):
    pass


class BadPrime(ArithmeticError):
    """A prime divides a coefficient denominator."""


def _coerce_scalar(c):
    if isinstance(c, QRho):
        return c.x if c.y == 0 else c
    return qq(c)


@lru_cache(maxsize=None)
def _ring(names, weights):
    return PolyRing._create(names, weights)


class PolyRing:
    """Polynomial ring Q[x1..xn] with a weight attached to each variable.

    Rings are interned: PolyRing(names, weights) returns the same object for
    the same arguments, so identity comparison is enough to match rings.
    """

    def __new__(cls, names, weights=None):
        names = tuple(names)
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names):
            raise ValueError("one weight per variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        return _ring(names, weights)

    @classmethod
    def _create(cls, names, weights):
        self = object.__new__(cls)
        self.names = names
        self.weights = weights
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        self.shifts = tuple(BITS * (self.nvars - 1 - i) for i in range(self.nvars))
        self.guard = sum(1 << (s + BITS - 1) for s in self.shifts)
        return self

    def __reduce__(self):
        return (PolyRing, (self.names, self.weights))

    def __repr__(self):
        return f"PolyRing({list(self.names)}, {list(self.weights)})"

    # packed exponent helpers
    def pack(self, exps):
        e = 0
        for k, s in zip(exps, self.shifts):
            if k < 0 or k > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {k} out of range")
            e |= k << s
        return e

    def unpack(self, e):
        return tuple((e >> s) & MASK for s in self.shifts)

    def exponent_of(self, e, i):
        return (e >> self.shifts[i]) & MASK

    def unit(self, i):
        return 1 << self.shifts[i]

    def weight_of(self, e):
        return sum(w * ((e >> s) & MASK) for w, s in zip(self.weights, self.shifts))

    def degree_of(self, e):
        return sum((e >> s) & MASK for s in self.shifts)

    # constructors
    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return MultiPoly(self, {0: mpq(1)})

    def __call__(self, x):
        if isinstance(x, MultiPoly):
            return x.to_ring(self)
        if isinstance(x, str):
            return parse_poly(x, self)
        c = _coerce_scalar(x)
        return MultiPoly(self, {0: c} if c else {})

    def var(self, name):
        return MultiPoly(self, {self.unit(self.index[name]): mpq(1)})

    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def monomial(self, exps, coeff=1):
        c = _coerce_scalar(coeff)
        return MultiPoly(self, {self.pack(exps): c} if c else {})

    def from_terms(self, items):
        """Build from (exponent tuple, coefficient) pairs; repeated exponents add."""
        d = {}
        for exps, c in items:
            e = self.pack(exps)
            d[e] = d.get(e, 0) + _coerce_scalar(c)
        return MultiPoly(self, {e: c for e, c in d.items() if c})

    def extend(self, names, weights=None):
        """Ring with extra variables appended."""
        names = tuple(n for n in names if n not in self.index)
        if weights is None:
            weights = (1,) * len(names)
        return PolyRing(self.names + names, self.weights + tuple(weights))

    def monomials_of_weight(self, w, degree=None):
        """All exponent tuples of weighted degree exactly w (optionally fixed total degree)."""
        out = []
        n = self.nvars
        ws = self.weights

        def rec(i, left, acc, deg):
            if i == n:
                if left == 0 and (degree is None or deg == degree):
                    out.append(tuple(acc))
                return
            wi = ws[i]
            if wi == 0:
                if degree is None:
                    raise ValueError("weight-0 variables need a degree bound")
                top = degree - deg
            else:
                top = left // wi
                if degree is not None:
                    top = min(top, degree - deg)
            for k in range(top, -1, -1):
                acc.append(k)
                rec(i + 1, left - k * wi, acc, deg + k)
                acc.pop()

        rec(0, w, [], 0)
        return out


class MultiPoly:
    """Immutable sparse polynomial.  ``terms`` maps packed exponents to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # ---- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, mpq(0))

    def constant_term(self):
        return self.terms.get(0, mpq(0))

    def items(self):
        """(exponent tuple, coefficient) pairs in canonical (graded lex, descending) order."""
        unpack = self.ring.unpack
        pairs = [(unpack(e), c) for e, c in self.terms.items()]
        pairs.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return pairs

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # ---- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        d = dict(big)
        for e, c in small.items():
            s = d.get(e)
            if s is None:
                d[e] = c
            else:
                s = s + c
                if s:
                    d[e] = s
                else:
                    del d[e]
        return MultiPoly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = _coerce_scalar(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        o = self._coerce(other)
        a, b = self.terms, o.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        ga = 0
        for e in a:
            ga |= e
        gb = 0
        for e in b:
            gb |= e
        guard = self.ring.guard
        if (ga & guard) or (gb & guard) or ((ga + gb) & guard):
            _check_overflow(self.ring, a, b)
        d = {}
        get = d.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = ea + eb
                v = get(e)
                if v is None:
                    d[e] = ca * cb
                else:
                    d[e] = v + ca * cb
        return MultiPoly(self.ring, {e: c for e, c in d.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant():
                return self.scale(1 / other.constant_value())
            return divexact(self, other)
        c = _coerce_scalar(other)
        return self.scale(1 / c)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return self.ring.one()
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            exps = self.ring.unpack(e)
            return self.ring.monomial(tuple(k * n for k in exps), c ** n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---- structure -------------------------------------------------------
    def degree(self, var=None):
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(self.ring.degree_of(e) for e in self.terms)
        i = self.ring.index[var]
        s = self.ring.shifts[i]
        return max((e >> s) & MASK for e in self.terms)

    def weighted_degree(self):
        if not self.terms:
            return -1
        return max(self.ring.weight_of(e) for e in self.terms)

    def min_weighted_degree(self):
        if not self.terms:
            return -1
        return min(self.ring.weight_of(e) for e in self.terms)

    def is_weighted_homogeneous(self):
        ws = {self.ring.weight_of(e) for e in self.terms}
        return len(ws) <= 1

    def homogeneous_components(self):
        out = {}
        for e, c in self.terms.items():
            out.setdefault(self.ring.weight_of(e), {})[e] = c
        return {w: MultiPoly(self.ring, d) for w, d in sorted(out.items())}

    def variables(self):
        """Names of variables that actually occur."""
        acc = 0
        for e in self.terms:
            acc |= e
        return [n for n, s in zip(self.ring.names, self.ring.shifts) if (acc >> s) & MASK]

    def coefficients(self, var):
        """Map k -> coefficient of var^k (a MultiPoly in the same ring, free of var)."""
        i = self.ring.index[var]
        s = self.ring.shifts[i]
        out = {}
        for e, c in self.terms.items():
            k = (e >> s) & MASK
            out.setdefault(k, {})[e - (k << s)] = c
        return {k: MultiPoly(self.ring, d) for k, d in out.items()}

    def coeff(self, var, k):
        i = self.ring.index[var]
        s = self.ring.shifts[i]
        d = {}
        for e, c in self.terms.items():
            if (e >> s) & MASK == k:
                d[e - (k << s)] = c
        return MultiPoly(self.ring, d)

    def coeff_monomial(self, exps):
        return self.terms.get(self.ring.pack(exps), mpq(0))

    def leading_coeff(self, var):
        return self.coeff(var, self.degree(var))

    def diff(self, var):
        i = self.ring.index[var]
        s = self.ring.shifts[i]
        unit = 1 << s
        d = {}
        for e, c in self.terms.items():
            k = (e >> s) & MASK
            if k:
                d[e - unit] = c * k
        return MultiPoly(self.ring, d)

    def map_coefficients(self, f):
        d = {}
        for e, c in self.terms.items():
            v = f(c)
            if v:
                d[e] = v
        return MultiPoly(self.ring, d)

    def is_rational(self):
        return all(not isinstance(c, QRho) or c.y == 0 for c in self.terms.values())

    def to_rational(self):
        """Drop QRho wrappers; raises if a genuine rho part remains."""
        return self.map_coefficients(lambda c: c.to_rational() if isinstance(c, QRho) else c)

    def lcm_denominator(self):
        from math import lcm
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(qq(c).denominator))
        return den

    def primitive(self):
        """Rational multiple with coprime integer coefficients and positive leading term."""
        if not self.terms:
            return self
        from math import gcd
        den = self.lcm_denominator()
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c.numerator) * (den // int(c.denominator)))
        lead = self.terms[max(self.terms)]
        scale = mpq(den, g)
        if lead < 0:
            scale = -scale
        return self.scale(scale)

    def monic(self):
        if not self.terms:
            return self
        return self.scale(1 / self.terms[max(self.terms)])

    def leading_term(self):
        e = max(self.terms)
        return e, self.terms[e]

    # ---- substitution and evaluation -----------------------------------
    def subs(self, mapping):
        """Substitute scalars or same-ring polynomials for some variables."""
        ring = self.ring
        images = {}
        for name, val in mapping.items():
            if name not in ring.index:
                continue
            images[name] = val if isinstance(val, MultiPoly) else ring(val)
        target = {n: (images[n] if n in images else ring.var(n)) for n in ring.names}
        return self.compose(target, ring)

    def compose(self, images, target_ring):
        """Replace every variable by images[name] (a MultiPoly of target_ring or a scalar)."""
        ring = self.ring
        imgs = []
        for n in ring.names:
            v = images.get(n)
            if v is None:
                if n in target_ring.index:
                    v = target_ring.var(n)
                else:
                    raise ValueError(f"no image for variable {n}")
            elif not isinstance(v, MultiPoly):
                v = target_ring(v)
            imgs.append(v)
        maxdeg = [0] * ring.nvars
        for e in self.terms:
            for i, s in enumerate(ring.shifts):
                k = (e >> s) & MASK
                if k > maxdeg[i]:
                    maxdeg[i] = k
        powers = []
        for i, v in enumerate(imgs):
            pw = [target_ring.one()]
            for _ in range(maxdeg[i]):
                pw.append(pw[-1] * v)
            powers.append(pw)
        # group by the first variable to share partial products
        acc = {}
        for e, c in self.terms.items():
            exps = ring.unpack(e)
            term = None
            for i, k in enumerate(exps):
                if k:
                    term = powers[i][k] if term is None else term * powers[i][k]
            if term is None:
                term = target_ring.one()
            for te, tc in term.terms.items():
                v = acc.get(te)
                acc[te] = tc * c if v is None else v + tc * c
        return MultiPoly(target_ring, {e: c for e, c in acc.items() if c})

    def to_ring(self, ring):
        """Re-express in another ring that contains every variable occurring here."""
        if ring is self.ring:
            return self
        for n in self.variables():
            if n not in ring.index:
                raise ValueError(f"variable {n} not in target ring {ring.names}")
        src = self.ring
        d = {}
        for e, c in self.terms.items():
            ne = 0
            for i, s in enumerate(src.shifts):
                k = (e >> s) & MASK
                if k:
                    ne |= k << ring.shifts[ring.index[src.names[i]]]
            d[ne] = c
        return MultiPoly(ring, d)

    def evaluate(self, point):
        """Exact value at a point given as {name: scalar}; all variables must be assigned."""
        ring = self.ring
        vals = [point[n] if n in point else None for n in ring.names]
        total = 0
        for e, c in self.terms.items():
            t = c
            for i, s in enumerate(ring.shifts):
                k = (e >> s) & MASK
                if k:
                    v = vals[i]
                    if v is None:
                        raise ValueError(f"variable {ring.names[i]} unassigned")
                    t = t * v ** k
            total = total + t
        return total

    def eval_mod(self, prime, values, npoints=None):
        """Vectorised evaluation mod prime; values maps names to int64 arrays (or ints)."""
        ring = self.ring
        arrays = []
        for n in ring.names:
            v = values.get(n)
            if v is not None and not np.isscalar(v):
                npoints = len(v)
            arrays.append(v)
        if npoints is None:
            npoints = 1
        maxdeg = [0] * ring.nvars
        for e in self.terms:
            for i, s in enumerate(ring.shifts):
                k = (e >> s) & MASK
                if k > maxdeg[i]:
                    maxdeg[i] = k
        powers = []
        for i, v in enumerate(arrays):
            if maxdeg[i] == 0:
                powers.append(None)
                continue
            if v is None:
                raise ValueError(f"variable {ring.names[i]} unassigned")
            base = np.full(npoints, int(v) % prime, dtype=np.int64) if np.isscalar(v) \
                else np.asarray(v, dtype=np.int64) % prime
            pw = [np.ones(npoints, dtype=np.int64), base]
            for _ in range(maxdeg[i] - 1):
                pw.append(pw[-1] * base % prime)
            powers.append(pw)
        out = np.zeros(npoints, dtype=np.int64)
        for e, c in self.terms.items():
            cm = rational_mod(c, prime)
            t = np.full(npoints, cm, dtype=np.int64)
            for i, s in enumerate(ring.shifts):
                k = (e >> s) & MASK
                if k:
                    t = t * powers[i][k] % prime
            out = (out + t) % prime
        return out

    # ---- text ------------------------------------------------------------
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"MultiPoly({to_text(self)!r})"


def _check_overflow(ring, a, b):
    da = [0] * ring.nvars
    db = [0] * ring.nvars
    for d, terms in ((da, a), (db, b)):
        for e in terms:
            for i, s in enumerate(ring.shifts):
                k = (e >> s) & MASK
                if k > d[i]:
                    d[i] = k
    for i in range(ring.nvars):
        if da[i] + db[i] > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent of {ring.names[i]} exceeds {MAX_EXPONENT}")


def rational_mod(c, prime):
    if isinstance(c, QRho):
        c = c.to_rational()
    den = int(c.denominator) % prime
    if den == 0:
        raise BadPrime(f"{prime} divides a denominator")
    return int(c.numerator) * pow(den, -1, prime) % prime


def divexact(f, g):
    """Exact multivariate division f/g; raises ValueError if g does not divide f."""
    q, r = divmod_multivariate(f, g)
    if r:
        raise ValueError("division is not exact")
    return q


def divmod_multivariate(f, g):
    """Division with remainder in lex order (first variable most significant)."""
    ring = f.ring
    if g.ring is not ring:
        raise ValueError("ring mismatch")
    if not g.terms:
        raise ZeroDivisionError("division by zero polynomial")
    ge, gc = g.leading_term()
    ginv = 1 / gc
    gtail = [(e, c) for e, c in g.terms.items() if e != ge]
    guard = ring.guard
    rem = dict(f.terms)
    heap = [-e for e in rem]
    heapq.heapify(heap)
    quo = {}
    out_rem = {}
    while heap:
        e = -heapq.heappop(heap)
        c = rem.pop(e, None)
        if c is None or not c:
            continue
        # skip duplicates left in the heap
        while heap and -heap[0] == e:
            heapq.heappop(heap)
        d = e - ge
        if d >= 0 and not (d & guard) and _divides(ring, ge, e):
            qc = c * ginv
            quo[d] = qc
            for te, tc in gtail:
                ne = te + d
                v = rem.get(ne)
                if v is None:
                    rem[ne] = -qc * tc
                    heapq.heappush(heap, -ne)
                else:
                    v = v - qc * tc
                    if v:
                        rem[ne] = v
                    else:
                        del rem[ne]
        else:
            out_rem[e] = c
    return MultiPoly(ring, quo), MultiPoly(ring, out_rem)


def _divides(ring, a, b):
    for s in ring.shifts:
        if ((a >> s) & MASK) > ((b >> s) & MASK):
            return False
    return True


# ---- canonical text ---------------------------------------------------------

def _coeff_text(c):
    if isinstance(c, QRho):
        if c.y == 0:
            return format_rational(c.x)
        return str(c)
    return format_rational(c)


def to_text(f):
    """Canonical text: graded-lex descending terms, coefficients as num/den."""
    if not f.terms:
        return "0"
    names = f.ring.names
    parts = []
    for exps, c in f.items():
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, exps) if k)
        neg = False
        if not isinstance(c, QRho) or c.y == 0:
            cr = c.x if isinstance(c, QRho) else c
            if cr < 0:
                neg, cr = True, -cr
            ctext = format_rational(cr)
        else:
            ctext = str(c)
        if mono:
            body = mono if ctext == "1" else f"{ctext}*{mono}"
        else:
            body = ctext
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_poly(text, ring):
    """Parse +, -, *, /, ^ (or **), parentheses, integers and variable names.

    Division is only allowed by constants.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr():
        neg = False
        if peek() == ("op", "-"):
            take()
            neg = True
        elif peek() == ("op", "+"):
            take()
        val = term()
        if neg:
            val = -val
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = factor()
            if op == "*":
                val = val * rhs
            else:
                if not rhs.is_constant():
                    raise ValueError("division by a non-constant")
                val = val.scale(1 / rhs.constant_value())
        return val

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, k = take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            base = base ** k
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return ring(val)
        if kind == "name":
            if val not in ring.index:
                raise ValueError(f"unknown variable {val!r} for ring {ring.names}")
            return ring.var(val)
        if (kind, val) == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return v
        if (kind, val) == ("op", "-"):
            return -factor()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result


def common_ring(*polys, extra=()):
    """Smallest ring (by name union, first-seen order) holding all inputs."""
    names, weights = [], []
    for f in polys:
        for n, w in zip(f.ring.names, f.ring.weights):
            if n not in names:
                names.append(n)
                weights.append(w)
    for n, w in extra:
        if n not in names:
            names.append(n)
            weights.append(w)
    return PolyRing(names, weights)

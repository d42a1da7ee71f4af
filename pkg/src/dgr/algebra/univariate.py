"""Polynomials viewed in one main variable: resultants, gcd, squarefree parts.

Coefficients in the main variable are MultiPolys of the same ring that do not
involve it, so everything here works over Q[other variables], which is how we
handle "univariate over a rational-function field" without fractions.
"""
from fractions import Fraction
from math import gcd as igcd

from .poly import divexact
from .scalars import mpq, qq


class EliminationError(ValueError):
    pass


def to_dense(f, var):
    """Coefficient list [c0, c1, ..., cn] of f in var."""
    if not f:
        return []
    coeffs = f.coefficients(var)
    n = max(coeffs)
    zero = f.ring.zero()
    return [coeffs.get(k, zero) for k in range(n + 1)]


def from_dense(coeffs, var, ring):
    x = ring.var(var)
    out = ring.zero()
    for k, c in enumerate(coeffs):
        if c:
            out = out + c * x ** k
    return out


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def prem(a, b):
    """Pseudo-remainder of dense coefficient lists: lc(b)^(da-db+1)*a mod b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - 1 - db + 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            if c:
                a[i + shift] = a[i + shift] - la * c
        a.pop()
        _trim(a)
        e -= 1
    if e > 0 and a:
        m = lb ** e
        a = [c * m for c in a]
    return a


def resultant(f, g, var):
    """Res_var(f, g) via the subresultant PRS; result lies in the same ring, free of var."""
    ring = f.ring
    if not f or not g:
        raise ValueError("resultant of a zero polynomial")
    A, B = to_dense(f, var), to_dense(g, var)
    da, db = len(A) - 1, len(B) - 1
    if da == 0 and db == 0:
        raise EliminationError("no elimination variable")
    if da == 0:
        return A[0] ** db
    if db == 0:
        return B[0] ** da
    s = 1
    if da < db:
        A, B = B, A
        if da % 2 and db % 2:
            s = -1
    one = ring.one()
    gg, hh = one, one
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = prem(A, B)
        if not R:
            return ring.zero()
        A = B
        den = gg * hh ** delta
        B = [_div(c, den) for c in R]
        gg = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            hh = gg
        else:
            hh = _div(gg ** delta, hh ** (delta - 1))
        if len(B) == 1:
            da = len(A) - 1
            if da == 1:
                res = B[0]
            else:
                res = _div(B[0] ** da, hh ** (da - 1))
            return res if s == 1 else -res


def _div(a, b):
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    return divexact(a, b)


def discriminant(f, var):
    n = f.degree(var)
    r = resultant(f, f.diff(var), var)
    lc = f.leading_coeff(var)
    d = _div(r, lc)
    return -d if (n * (n - 1) // 2) % 2 else d


# ---- gcd ---------------------------------------------------------------------

def normalize(f):
    """Canonical associate: integer coprime coefficients, positive leading term."""
    return f.primitive()


def content(f, var):
    """gcd of the coefficients of f in var (a polynomial free of var)."""
    c = f.ring.zero()
    for k, coeff in sorted(f.coefficients(var).items()):
        c = gcd(c, coeff)
        if c.is_constant():
            return f.ring.one()
    return c


def primitive_part(f, var):
    c = content(f, var)
    return _div(f, c) if not c.is_constant() else f


def gcd(f, g):
    """Multivariate gcd over Q, normalized by ``normalize``; gcd(0, 0) = 0."""
    if not f:
        return normalize(g) if g else g
    if not g:
        return normalize(f)
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    vf, vg = set(f.variables()), set(g.variables())
    common = [v for v in f.ring.names if v in vf and v in vg]
    if not common:
        return f.ring.one()
    # pick the main variable of smallest max-degree to keep coefficients small
    x = min(common, key=lambda v: (max(f.degree(v), g.degree(v)), f.ring.names.index(v)))
    cf, cg = content(f, x), content(g, x)
    c = gcd(cf, cg)
    A, B = to_dense(_div(f, cf), x), to_dense(_div(g, cg), x)
    if len(A) < len(B):
        A, B = B, A
    while len(B) > 1:
        R = prem(A, B)
        if not R:
            break
        A, B = B, _primitive_dense(R)
    if len(B) == 1:
        res = c
    else:
        res = c * from_dense(_primitive_dense(B), x, f.ring)
    return normalize(res)


def _primitive_dense(a):
    c = a[0].ring.zero()
    for coeff in a:
        if not coeff:
            continue
        c = gcd(c, coeff)
        if c.is_constant():
            break
    if c.is_constant():
        return _scale_integral(a)
    return _scale_integral([_div(x, c) for x in a])


def _scale_integral(a):
    """Clear rational denominators and integer content across the list."""
    from math import lcm
    den, num = 1, 0
    for x in a:
        for c in x.terms.values():
            c = qq(c)
            den = lcm(den, int(c.denominator))
    for x in a:
        for c in x.terms.values():
            c = qq(c)
            num = igcd(num, int(c.numerator) * (den // int(c.denominator)))
    if num == 0:
        return a
    s = mpq(den, num)
    return [x.scale(s) for x in a]


def lcm_poly(f, g):
    return divexact(f * g, gcd(f, g))


def squarefree_decomposition(f, var):
    """Yun's algorithm in var over Q(other variables).

    Returns [(factor, multiplicity), ...] with factors primitive in var,
    squarefree and pairwise coprime; the product of factor^multiplicity equals
    f up to a factor free of var.
    """
    if not f:
        raise ValueError("squarefree decomposition of zero")
    if f.degree(var) <= 0:
        return []
    f = primitive_part(f, var)
    df = f.diff(var)
    a = gcd(f, df)
    b = divexact(f, a)
    c = divexact(df, a)
    out = []
    i = 1
    while b.degree(var) > 0:
        d = c - b.diff(var)
        y = gcd(b, d)
        if y.degree(var) > 0:
            out.append((normalize(primitive_part(y, var)), i))
        b = divexact(b, y)
        c = divexact(d, y)
        i += 1
    return out


def squarefree_part(f, var):
    out = f.ring.one()
    for fac, _ in squarefree_decomposition(f, var):
        out = out * fac
    return out


# ---- rational roots ----------------------------------------------------------

def _divisors(n):
    n = abs(n)
    small = []
    large = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
        if d > 10 ** 6:
            raise ValueError("coefficient too large for divisor enumeration")
    return small + large[::-1]


def rational_roots(coeffs):
    """Distinct rational roots of a univariate polynomial given by rational coefficients c0..cn."""
    from math import lcm
    cs = [Fraction(int(qq(c).numerator), int(qq(c).denominator)) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    roots = []
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    cs = cs[k:]
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = igcd(g, c)
    ints = [c // g for c in ints]
    if len(ints) == 1:
        return roots
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            if igcd(p, q) != 1:
                continue
            for r in (Fraction(p, q), Fraction(-p, q)):
                v = 0
                for c in reversed(ints):
                    v = v * r + c
                if v == 0 and r not in roots:
                    roots.append(r)
    return sorted(roots)


def root_multiplicity(coeffs, r):
    """Multiplicity of r as a root of the coefficient list c0..cn."""
    cs = [Fraction(int(qq(c).numerator), int(qq(c).denominator)) for c in coeffs]
    m = 0
    while cs and any(cs):
        # synthetic division by (x - r)
        n = len(cs) - 1
        out = [Fraction(0)] * n
        acc = Fraction(0)
        for i in range(n, 0, -1):
            acc = acc * r + cs[i]
            out[i - 1] = acc
        rem = acc * r + cs[0]
        if rem != 0:
            break
        m += 1
        cs = out
    return m

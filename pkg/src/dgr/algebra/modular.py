"""Linear algebra over Q through word-sized prime images.

Kernels are computed modulo a deterministic sequence of primes below 2**31
(so products fit in int64), combined by Chinese remaindering and rational
reconstruction, and then certified exactly.  The random seed only chooses
evaluation points.
"""
import random
from fractions import Fraction

import gmpy2
import numpy as np

from .poly import BadPrime, MultiPoly, rational_mod
from .scalars import mpq, qq


class InsufficientPrimes(ArithmeticError):
    pass


class CertificationError(ArithmeticError):
    pass


def _prime_sequence(count, start=(1 << 31) - 1):
    out = []
    n = start
    while len(out) < count:
        if gmpy2.is_prime(n):
            out.append(n)
        n -= 2
    return out


PRIMES = _prime_sequence(256)


class PrimeImage:
    """A matrix reduced modulo a prime.

    ``rows`` are sequences of rationals; a prime dividing a denominator raises
    BadPrime, and callers move on to the next prime.
    """

    def __init__(self, prime, matrix):
        self.prime = prime
        self.matrix = np.asarray(matrix, dtype=np.int64) % prime

    @classmethod
    def from_rationals(cls, prime, rows, ncols):
        m = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, row in enumerate(rows):
            items = row.items() if isinstance(row, dict) else enumerate(row)
            for j, v in items:
                if v:
                    m[i, j] = rational_mod(qq(v), prime)
        return cls(prime, m)

    def rref(self):
        return rref_mod(self.matrix, self.prime)

    def kernel(self):
        return kernel_mod(self.matrix, self.prime)


def rref_mod(matrix, p):
    """Reduced row echelon form mod p.  Returns (R, pivot_columns)."""
    a = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_mod(matrix, p):
    """Kernel basis mod p in canonical form: one vector per free column, with a 1 there.

    Returns (basis as int64 array of shape (k, ncols), pivots).
    """
    ncols = np.shape(matrix)[1]
    R, pivots = rref_mod(matrix, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-R[r, f]) % p
    return basis, pivots


def crt_pair(r1, m1, r2, m2):
    """Combine x = r1 mod m1 and x = r2 mod m2 (coprime moduli)."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruct(a, m):
    """n/d with n = a*d mod m and |n|, d <= sqrt(m/2); None if no such fraction exists."""
    a = int(a) % m
    bound = int(gmpy2.isqrt(m // 2))
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gmpy2.gcd(r1, s1) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return mpq(r1, s1)


def _reconstruct_all(residues, modulus):
    out = []
    for x in residues:
        v = rational_reconstruct(int(x), modulus)
        if v is None:
            return None
        out.append(v)
    return out


def _select_generic(images):
    """Keep prime images with maximal rank and lexicographically first pivots."""
    best = None
    for key in images:
        if best is None or (-len(key), key) < (-len(best), best):
            best = key
    return best


def modular_kernel(image_fn, ncols, certify, min_agree=3, max_primes=64, primes=None):
    """Rational kernel from prime images.

    image_fn(p) returns an int64 matrix mod p (or raises BadPrime).  certify(v)
    must return True iff the rational vector v is an exact kernel vector.
    The kernel is returned as a list of rational vectors in canonical
    (reduced) form, one per free column.
    """
    primes = PRIMES if primes is None else primes
    groups = {}
    stable = {}
    last = {}
    tried = 0
    for p in primes:
        if tried >= max_primes:
            break
        tried += 1
        try:
            mat = image_fn(p)
        except BadPrime:
            continue
        basis, pivots = kernel_mod(mat, p)
        key = tuple(pivots)
        res, mod = groups.get(key, (None, 1))
        flat = basis.reshape(-1).astype(object)
        if res is None:
            res = [int(x) for x in flat]
        else:
            res = [crt_pair(r, mod, int(x), p)[0] for r, x in zip(res, flat)]
        mod *= p
        groups[key] = (res, mod)
        best = _select_generic(groups)
        if key != best:
            continue
        rec = _reconstruct_all(res, mod)
        if rec is not None and rec == last.get(key):
            stable[key] = stable.get(key, 1) + 1
        else:
            stable[key] = 1 if rec is not None else 0
        last[key] = rec
        if stable[key] >= min_agree:
            nfree = ncols - len(key)
            vectors = [rec[i * ncols:(i + 1) * ncols] for i in range(nfree)]
            for v in vectors:
                if not certify(v):
                    raise CertificationError("unlucky evaluation, reseed")
            return vectors
    raise InsufficientPrimes("insufficient primes")


def kernel_of_matrix(rows, ncols, **kw):
    """Exact rational kernel of a sparse rational matrix (rows: dicts col -> value)."""
    rows = [r if isinstance(r, dict) else {j: v for j, v in enumerate(r) if v} for r in rows]
    rows = [{j: qq(v) for j, v in r.items()} for r in rows]

    def image(p):
        return PrimeImage.from_rationals(p, rows, ncols).matrix

    def certify(v):
        for r in rows:
            s = 0
            for j, c in r.items():
                if v[j]:
                    s += c * v[j]
            if s:
                return False
        return True

    if not rows:
        return [[mpq(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    return modular_kernel(image, ncols, certify, **kw)


def _reconstruct_solution(rows, rhs, ncols, min_agree=3, max_primes=64):
    """Canonical particular solution (free variables zero) of rows . x = rhs.

    Returns ("solution", x) or ("inconsistent", None); the solution is
    certified exactly, inconsistency only modulo primes (callers certify it).
    """
    groups, last, stable = {}, {}, {}
    tried = 0
    for p in PRIMES:
        if tried >= max_primes:
            break
        tried += 1
        try:
            img = PrimeImage.from_rationals(p, rows, ncols).matrix
            b = np.array([rational_mod(qq(v), p) for v in rhs], dtype=np.int64).reshape(-1, 1)
        except BadPrime:
            continue
        R, pivots = rref_mod(np.hstack([img, b]), p)
        key = tuple(pivots)
        if ncols in key:
            vec = []
        else:
            vec = [0] * ncols
            for r, pc in enumerate(pivots):
                vec[pc] = int(R[r, ncols])
        res, mod = groups.get(key, (None, 1))
        res = vec if res is None else [crt_pair(x, mod, y, p)[0] for x, y in zip(res, vec)]
        mod *= p
        groups[key] = (res, mod)
        best = _select_generic(groups)
        if key != best:
            continue
        if ncols in key:
            stable[key] = stable.get(key, 0) + 1
            if stable[key] >= min_agree:
                return "inconsistent", None
            continue
        rec = _reconstruct_all(res, mod)
        if rec is not None and rec == last.get(key):
            stable[key] = stable.get(key, 1) + 1
        else:
            stable[key] = 1 if rec is not None else 0
        last[key] = rec
        if stable[key] >= min_agree:
            if _residual_zero(rows, rhs, rec):
                return "solution", rec
            raise CertificationError("unlucky evaluation, reseed")
    raise InsufficientPrimes("insufficient primes")


def _residual_zero(rows, rhs, x):
    for r, b in zip(rows, rhs):
        s = -qq(b)
        for j, c in r.items():
            if x[j]:
                s += c * x[j]
        if s:
            return False
    return True


def _normalize_rows(rows):
    out = []
    for r in rows:
        if not isinstance(r, dict):
            r = {j: v for j, v in enumerate(r) if v}
        out.append({j: qq(v) for j, v in r.items() if v})
    return out


def solve_with_witness(rows, rhs, ncols):
    """Solve rows . x = rhs exactly.

    Returns (x, None) when feasible and (None, y) when infeasible, where y is a
    certified witness: y . rows = 0 and y . rhs = 1.
    """
    rows = _normalize_rows(rows)
    if not rows:
        return [mpq(0)] * ncols, None
    status, x = _reconstruct_solution(rows, rhs, ncols)
    if status == "solution":
        return x, None
    # dual system: rows^T y = 0, rhs . y = 1
    nrows = len(rows)
    dual = [dict() for _ in range(ncols + 1)]
    for i, r in enumerate(rows):
        for j, c in r.items():
            dual[j][i] = c
    for i, b in enumerate(rhs):
        if b:
            dual[ncols][i] = qq(b)
    dual_rhs = [0] * ncols + [1]
    status, y = _reconstruct_solution(dual, dual_rhs, nrows)
    if status != "solution":
        raise CertificationError("neither a solution nor an infeasibility witness certified")
    return None, y


def solve_rational(rows, rhs, ncols):
    """One exact solution x of rows . x = rhs, or None if the system is (certifiably) infeasible."""
    x, _ = solve_with_witness(rows, rhs, ncols)
    return x


def sample_points(names, count, seed, bound=1 << 20):
    """Deterministic integer evaluation points {name: [values]}."""
    rng = random.Random(seed)
    return {n: [rng.randint(-bound, bound) for _ in range(count)] for n in names}


def kernel_rational(columns, sample_budget=None, seed=0, certify=None, names=None, **kw):
    """Q-kernel of a list of columns.

    Columns are MultiPolys over a common ring, or callables col(p, points) that
    return int64 evaluations modulo p at the shared sample points.  The matrix
    has one row per sample point and one column per input.  Kernel vectors are
    certified by exact symbolic substitution (MultiPoly columns) or by the
    supplied ``certify`` callback.
    """
    ncols = len(columns)
    if sample_budget is None:
        sample_budget = ncols + 8
    if sample_budget < ncols:
        raise ValueError("sample_budget must be at least the number of columns")
    polys = all(isinstance(c, MultiPoly) for c in columns)
    if polys:
        ring = columns[0].ring
        names = ring.names
    elif names is None:
        raise ValueError("callable columns need variable names")
    pts = sample_points(names, sample_budget, seed)

    def image(p):
        arrs = {n: np.array([v % p for v in vals], dtype=np.int64) for n, vals in pts.items()}
        mat = np.zeros((sample_budget, ncols), dtype=np.int64)
        for j, col in enumerate(columns):
            if isinstance(col, MultiPoly):
                mat[:, j] = col.eval_mod(p, arrs, sample_budget)
            else:
                mat[:, j] = col(p, arrs)
        return mat

    if certify is None:
        if not polys:
            raise ValueError("callable columns need a certify callback")

        def certify(v):
            acc = columns[0].ring.zero()
            for c, col in zip(v, columns):
                if c:
                    acc = acc + col.scale(c)
            return acc.is_zero()

    return modular_kernel(image, ncols, certify, **kw)


def kernel_exact(rows, ncols):
    """Fraction-based Gauss-Jordan kernel; a slow reference for small matrices."""
    a = [[Fraction(int(qq(x).numerator), int(qq(x).denominator)) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        out.append(v)
    return out


def column_basis(rows, ncols, rhs_columns=(), min_agree=2):
    """Pivot columns of the matrix (a column basis of its column space over Q).

    Chosen at the generic prime: maximal rank, then lexicographically first
    pivots, agreeing across ``min_agree`` primes.
    """
    rows = _normalize_rows(rows)
    if not rows:
        return []
    seen = {}
    for p in PRIMES:
        try:
            img = PrimeImage.from_rationals(p, rows, ncols).matrix
        except BadPrime:
            continue
        _, pivots = rref_mod(img, p)
        key = tuple(pivots)
        seen[key] = seen.get(key, 0) + 1
        best = _select_generic(seen)
        if seen[best] >= min_agree:
            return list(best)
    raise InsufficientPrimes("insufficient primes")


def solve_many(rows, ncols, rhs_list, min_agree=3, max_primes=64):
    """Solve rows . x = b exactly for every b in rhs_list.

    Returns a list with, per right-hand side, the canonical solution (free
    variables zero, certified exactly) or None when b is outside the column
    space at the generic prime; callers certify infeasibility separately.
    """
    rows = _normalize_rows(rows)
    nrhs = len(rhs_list)
    if not rows:
        return [[mpq(0)] * ncols for _ in rhs_list]
    rhs = [[qq(b[i]) if b[i] else 0 for b in rhs_list] for i in range(len(rows))]
    groups, last, stable = {}, {}, {}
    tried = 0
    for p in PRIMES:
        if tried >= max_primes:
            break
        tried += 1
        try:
            img = PrimeImage.from_rationals(p, rows, ncols).matrix
            bimg = PrimeImage.from_rationals(p, rhs, nrhs).matrix
        except BadPrime:
            continue
        A = np.hstack([img, bimg])
        # pivots of the coefficient block decide the basis; rhs columns become pivots only if infeasible
        R, pivots = rref_mod(A, p)
        key = tuple(pivots)
        coeff_pivots = [c for c in pivots if c < ncols]
        ra = len(coeff_pivots)
        tail = R[ra:, ncols:]
        bad = frozenset(int(j) for j in np.nonzero(tail.any(axis=0))[0]) if tail.size else frozenset()
        flat = []
        for j in range(nrhs):
            if j in bad:
                flat.extend([0] * ncols)
                continue
            vec = [0] * ncols
            for r, pc in enumerate(coeff_pivots):
                vec[pc] = int(R[r, ncols + j])
            flat.extend(vec)
        res, mod = groups.get(key, (None, 1))
        res = flat if res is None else [crt_pair(x, mod, y, p)[0] for x, y in zip(res, flat)]
        mod *= p
        groups[key] = (res, mod)
        best = _select_generic(groups)
        if key != best:
            continue
        rec = _reconstruct_all(res, mod)
        if rec is not None and rec == last.get(key):
            stable[key] = stable.get(key, 1) + 1
        else:
            stable[key] = 1 if rec is not None else 0
        last[key] = rec
        if stable[key] >= min_agree:
            out = []
            for j in range(nrhs):
                if j in bad:
                    out.append(None)
                    continue
                x = rec[j * ncols:(j + 1) * ncols]
                if not _residual_zero(rows, [r[j] for r in rhs], x):
                    raise CertificationError("unlucky evaluation, reseed")
                out.append(x)
            return out
    raise InsufficientPrimes("insufficient primes")

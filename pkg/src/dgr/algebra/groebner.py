"""Buchberger's algorithm with sugar selection and the Gebauer-Moeller criteria.

Used for elimination when the solution set is positive dimensional, where
iterated resultants vanish identically.  Monomials are the packed exponents
of ``PolyRing``; the order is a block order (eliminated variables first), each
block ordered by weighted degree and then lexicographically.
"""
import heapq

from .poly import MASK, MultiPoly
from .scalars import qq


class GroebnerBudgetExceeded(ArithmeticError):
    pass


class BlockOrder:
    """Weighted-degree lex on the first ``k`` variables, then on the rest."""

    def __init__(self, ring, k):
        self.ring = ring
        self.k = k
        n = ring.nvars
        self.split = ring.shifts[k - 1] if 0 < k else None
        self.low_shift = ring.shifts[k - 1] if 0 < k else ring.shifts[0] + 16
        self.first = [(ring.weights[i], ring.shifts[i]) for i in range(k)]
        self.rest = [(ring.weights[i], ring.shifts[i]) for i in range(k, n)]
        self.low_mask = (1 << self.low_shift) - 1 if k > 0 else -1
        self.bits = ring.shifts[0] + 16

    def key(self, e):
        w1 = sum(w * ((e >> s) & MASK) for w, s in self.first)
        w2 = sum(w * ((e >> s) & MASK) for w, s in self.rest)
        hi = e >> self.low_shift if self.k else 0
        lo = e & self.low_mask if self.k else e
        return ((((w1 << self.bits) | hi) << 40 | w2) << self.bits) | lo

    def weight(self, e):
        return sum(w * ((e >> s) & MASK) for w, s in self.first + self.rest)

    def in_first_block(self, e):
        return any((e >> s) & MASK for _, s in self.first)


class _Poly:
    __slots__ = ("terms", "lm", "lc", "sugar")

    def __init__(self, terms, order, sugar=None):
        self.terms = terms
        self.lm = max(terms, key=order.key)
        self.lc = terms[self.lm]
        self.sugar = sugar if sugar is not None else max(order.weight(e) for e in terms)

    def monic(self):
        inv = 1 / self.lc
        self.terms = {e: c * inv for e, c in self.terms.items()}
        self.lc = qq(1)
        return self


def _divides(ring, a, b):
    for s in ring.shifts:
        if ((a >> s) & MASK) > ((b >> s) & MASK):
            return False
    return True


def _lcm(ring, a, b):
    out = 0
    for s in ring.shifts:
        out |= max((a >> s) & MASK, (b >> s) & MASK) << s
    return out


def _coprime(ring, a, b):
    for s in ring.shifts:
        if (a >> s) & MASK and (b >> s) & MASK:
            return False
    return True


def _reduce(terms, basis, order, ring, budget):
    """Full reduction of a term dict by the basis; returns the remainder dict."""
    p = dict(terms)
    heap = [(-order.key(e), e) for e in p]
    heapq.heapify(heap)
    rem = {}
    steps = 0
    while heap:
        _, e = heapq.heappop(heap)
        c = p.pop(e, None)
        if c is None:
            continue
        red = None
        for g in basis:
            if _divides(ring, g.lm, e):
                red = g
                break
        if red is None:
            rem[e] = c
            continue
        steps += 1
        if budget is not None and steps > budget:
            raise GroebnerBudgetExceeded("reduction step budget exceeded")
        m = e - red.lm
        f = c / red.lc
        for eg, cg in red.terms.items():
            if eg == red.lm:
                continue
            e2 = eg + m
            old = p.get(e2)
            if old is None:
                p[e2] = -f * cg
                heapq.heappush(heap, (-order.key(e2), e2))
            else:
                v = old - f * cg
                if v:
                    p[e2] = v
                else:
                    del p[e2]
    return rem


def groebner(polys, k, max_steps=None, progress=None):
    """Reduced Groebner basis of the ideal generated by ``polys`` for the block order with k leading variables."""
    ring = polys[0].ring
    order = BlockOrder(ring, k)
    basis = []
    pairs = []

    def spoly(f, g):
        l = _lcm(ring, f.lm, g.lm)
        mf, mg = l - f.lm, l - g.lm
        out = {}
        for e, c in f.terms.items():
            out[e + mf] = c / f.lc
        for e, c in g.terms.items():
            e2 = e + mg
            v = out.get(e2, 0) - c / g.lc
            if v:
                out[e2] = v
            else:
                out.pop(e2, None)
        sugar = max(f.sugar + order.weight(mf), g.sugar + order.weight(mg))
        return out, sugar

    def update(h):
        nonlocal basis, pairs
        C = list(basis)
        D = []
        while C:
            g1 = C.pop(0)
            l1 = _lcm(ring, h.lm, g1.lm)
            if _coprime(ring, h.lm, g1.lm) or not any(
                    _divides(ring, _lcm(ring, h.lm, g2.lm), l1) for g2 in C + D):
                D.append(g1)
        E = [g for g in D if not _coprime(ring, h.lm, g.lm)]
        kept = []
        for f, g, l, s in pairs:
            if _divides(ring, h.lm, l) and _lcm(ring, f.lm, h.lm) != l and _lcm(ring, h.lm, g.lm) != l:
                continue
            kept.append((f, g, l, s))
        for g in E:
            l = _lcm(ring, h.lm, g.lm)
            s = max(h.sugar + order.weight(l - h.lm), g.sugar + order.weight(l - g.lm))
            kept.append((h, g, l, s))
        pairs = kept
        basis = [g for g in basis if not _divides(ring, h.lm, g.lm)] + [h]

    steps = 0
    for f in polys:
        if f:
            t = {e: qq(c) for e, c in f.terms.items()}
            rem = _reduce(t, basis, order, ring, None) if basis else t
            if rem:
                update(_Poly(rem, order).monic())
    while pairs:
        pairs.sort(key=lambda x: (x[3], order.key(x[2])))
        f, g, _, sugar = pairs.pop(0)
        s, sugar = spoly(f, g)
        if not s:
            continue
        rem = _reduce(s, basis, order, ring, max_steps)
        steps += 1
        if progress and steps % 50 == 0:
            progress(f"groebner: {steps} pairs, basis {len(basis)}, queue {len(pairs)}")
        if rem:
            update(_Poly(rem, order, sugar).monic())
    # interreduce
    basis.sort(key=lambda g: order.key(g.lm))
    out = []
    for i, g in enumerate(basis):
        others = [h for h in basis if h is not g]
        rem = _reduce(g.terms, others, order, ring, None)
        if rem:
            out.append(_Poly(rem, order).monic())
    return [MultiPoly(ring, dict(g.terms)) for g in out], order


def elimination_ideal(polys, k, **kw):
    """Generators of the ideal intersected with the subring of the variables after the first k."""
    gb, order = groebner(polys, k, **kw)
    return [g for g in gb if not any(order.in_first_block(e) for e in g.terms)]

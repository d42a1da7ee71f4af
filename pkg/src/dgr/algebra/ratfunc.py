"""Quotients of polynomials, kept reduced by a polynomial gcd."""
from .poly import MultiPoly, divexact, to_text
from .scalars import qq
from .univariate import gcd


class RationalFunction:
    """num/den over Q with gcd(num, den) = 1 and den normalized to a primitive, positive-leading form."""

    def __init__(self, num, den=None):
        if den is None:
            den = num.ring.one()
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num.ring is not den.ring:
            raise ValueError("numerator and denominator live in different rings")
        if not num:
            den = num.ring.one()
        else:
            g = gcd(num, den)
            if not g.is_constant():
                num, den = divexact(num, g), divexact(den, g)
        # make the denominator primitive with positive leading coefficient
        scaled = den.primitive()
        factor = qq(next(iter(scaled.terms.values()))) / qq(den.terms[next(iter(scaled.terms))])
        self.num = num.scale(factor)
        self.den = scaled
        self.ring = num.ring

    @classmethod
    def coerce(cls, x, ring):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiPoly):
            return cls(x)
        return cls(ring(x))

    def __add__(self, other):
        o = RationalFunction.coerce(other, self.ring)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other, self.ring))

    def __rsub__(self, other):
        return RationalFunction.coerce(other, self.ring) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other, self.ring)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other, self.ring)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other, self.ring) / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction(self.den ** -n, self.num ** -n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int,)) or not isinstance(other, (RationalFunction, MultiPoly)):
            other = RationalFunction(self.ring(other))
        o = RationalFunction.coerce(other, self.ring)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def subs(self, mapping):
        den = self.den.subs(mapping)
        if not den:
            raise ZeroDivisionError("denominator vanishes under substitution")
        return RationalFunction(self.num.subs(mapping), den)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return qq(self.num.constant_value()) / qq(self.den.constant_value())

    def to_text(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return to_text(self.num)
        return f"({to_text(self.num)})/({to_text(self.den)})"

    __str__ = to_text

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

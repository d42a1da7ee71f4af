"""Exact scalars: rationals (gmpy2.mpq) and the field Q(rho), rho^2 = rho - 1.

rho is a primitive sixth root of unity, and sqrt(-3) = 2*rho - 1.
"""
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

ZERO = mpq(0)
ONE = mpq(1)


def qq(x):
    """Coerce an int, str ('3/2'), Fraction or mpq into an mpq."""
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            n, d = x.split("/")
            return mpq(int(n), int(d))
        return mpq(int(x))
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


def format_rational(c):
    """num/den text, or a bare integer when the denominator is 1."""
    c = qq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class QRho:
    """Element x + y*rho of Q[rho]/(rho^2 - rho + 1)."""

    __slots__ = ("x", "y")

    def __init__(self, x=0, y=0):
        self.x = qq(x)
        self.y = qq(y)

    @classmethod
    def coerce(cls, other):
        if isinstance(other, QRho):
            return other
        return cls(qq(other), 0)

    def __add__(self, other):
        o = QRho.coerce(other)
        return QRho(self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QRho(-self.x, -self.y)

    def __sub__(self, other):
        o = QRho.coerce(other)
        return QRho(self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return QRho.coerce(other) - self

    def __mul__(self, other):
        o = QRho.coerce(other)
        # (x1 + y1 r)(x2 + y2 r) with r^2 = r - 1
        yy = self.y * o.y
        return QRho(self.x * o.x - yy, self.x * o.y + self.y * o.x + yy)

    __rmul__ = __mul__

    def conjugate(self):
        # the other root of r^2 - r + 1 is 1 - r
        return QRho(self.x + self.y, -self.y)

    def norm(self):
        return self.x * self.x + self.x * self.y + self.y * self.y

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(rho)")
        c = self.conjugate()
        return QRho(c.x / n, c.y / n)

    def __truediv__(self, other):
        return self * QRho.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QRho.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QRho(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = QRho.coerce(other)
        except TypeError:
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def is_rational(self):
        return self.y == 0

    def to_rational(self):
        if self.y != 0:
            raise ValueError(f"{self} is not rational")
        return self.x

    def __repr__(self):
        return f"QRho({format_rational(self.x)}, {format_rational(self.y)})"

    def __str__(self):
        if self.y == 0:
            return format_rational(self.x)
        return f"({format_rational(self.x)}+{format_rational(self.y)}*r)"


RHO = QRho(0, 1)
SQRT_MINUS_3 = QRho(-1, 2)


def rho_power(k):
    return RHO ** (k % 6)


def is_zero(c):
    return not c


__all__ = [
    "QRho", "RHO", "SQRT_MINUS_3", "rho_power", "qq", "format_rational",
    "mpq", "gmpy2", "ZERO", "ONE", "is_zero",
]

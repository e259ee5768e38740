"""Exact scalars.

Everything in the package computes over Fraction (arbitrary-precision
rationals, kept canonical by the stdlib).  Two refinements matter to the
class-group side:

* half-integers: rationals whose denominator is a power of two, the
  coefficient ring Z[1/2].  They are ordinary Fractions here; `is_dyadic`
  is the membership test.
* prime fields GF(p) for fast property tests of the linear algebra; a
  small immutable wrapper with field arithmetic.

Serialization is decimal-free: "p/q" strings (or "p" when q = 1), so
reports round-trip exactly.

>>> format_scalar(Fraction(-3, 4))
'-3/4'
>>> parse_scalar('7')
Fraction(7, 1)
>>> is_dyadic(Fraction(5, 8)), is_dyadic(Fraction(1, 3))
(True, False)
"""

from fractions import Fraction

from .errors import ParseError

HALF = Fraction(1, 2)


def parse_scalar(s):
    """Parse "p/q" (or "p") into a Fraction.  No floats accepted."""
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise ParseError("scalar must be an integer or a 'p/q' string: %r" % (s,))
    txt = s.strip()
    try:
        if "/" in txt:
            num, den = txt.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(txt))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad scalar %r: %s" % (s, exc)) from None


def format_scalar(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def is_dyadic(x):
    """True iff x lies in Z[1/2] (denominator a power of two)."""
    d = Fraction(x).denominator
    return d & (d - 1) == 0


class GFp:
    """Element of a prime field GF(p).  Arithmetic stays in the field;
    mixing different p is a bug and raises immediately."""

    __slots__ = ("p", "v")

    def __init__(self, p, v):
        self.p = p
        self.v = v % p

    def _lift(self, other):
        if isinstance(other, GFp):
            if other.p != self.p:
                raise ValueError("mixed characteristics %d, %d" % (self.p, other.p))
            return other
        if isinstance(other, int):
            return GFp(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GFp(self.p, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return GFp(self.p, -self.v)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GFp(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GFp(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GFp(self.p, self.v * o.v)

    __rmul__ = __mul__

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return GFp(self.p, pow(self.v, self.p - 2, self.p))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        return isinstance(other, GFp) and self.p == other.p and self.v == other.v

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "GFp(%d, %d)" % (self.p, self.v)

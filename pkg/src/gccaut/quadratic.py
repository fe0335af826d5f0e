"""Exact arithmetic in a real quadratic extension Q(sqrt(d)).

All root-system coordinates and bilinear-form values in this library are
numbers of the form a + b*sqrt(d) with a, b rational and d a fixed
square-free positive integer (d=1 for crystallographic realizations,
d=5 for the golden-ratio realizations).  Comparisons use the real
embedding with sqrt(d) > 0, so the order is total and exact; no floating
point is involved anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

RationalLike = int | Fraction


def _sgn(q: Fraction | int) -> int:
    return (q > 0) - (q < 0)


@total_ordering
class QuadExt:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).

    Instances are immutable. Mixed arithmetic with ints and Fractions is
    supported; arithmetic between two QuadExt values requires equal d
    (for d=1 the irrational part is folded into the rational part at
    construction, so ordinary rationals are the d=1 special case).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if d < 1:
            raise ValueError(f"radicand must be a positive integer, got {d}")
        if d == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadExt is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def rational(cls, q: RationalLike, d: int = 1) -> QuadExt:
        return cls(q, 0, d)

    def _coerce(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            if other.d == self.d or other.b == 0:
                return QuadExt(other.a, other.b, self.d)
            if self.b == 0:
                return other
            return None
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return None

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, max(self.d, o.d))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = max(self.d, o.d)
        return QuadExt(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadExt:
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExt(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        """Sign of the real value a + b*sqrt(d), computed exactly."""
        a, b = self.a, self.b
        if b == 0:
            return _sgn(a)
        if a == 0:
            return _sgn(b)
        sa, sb = _sgn(a), _sgn(b)
        if sa == sb:
            return sa
        # opposite signs: |a| vs |b| sqrt(d) decides, via squares
        squares = a * a - b * b * self.d
        if squares == 0:
            return 0
        return sa if squares > 0 else sb

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    # -- formatting -----------------------------------------------------------

    def serialize(self) -> str:
        """Render as "a/b" or "a/b+c/d√D" (the wire format for root dumps)."""
        rat = f"{self.a.numerator}/{self.a.denominator}"
        if self.b == 0:
            return rat
        sign = "+" if self.b > 0 else "-"
        babs = abs(self.b)
        return f"{rat}{sign}{babs.numerator}/{babs.denominator}√{self.d}"

    def __repr__(self):
        if self.b == 0:
            return f"QuadExt({self.a})"
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return self.serialize()


ZERO = QuadExt(0)
ONE = QuadExt(1)

"""Exact rational intervals and axis-aligned complex boxes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = _frac(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_integer(self) -> bool:
        return floor(self.hi) >= self.lo

    def sign(self) -> int | None:
        """Sign of every point of the interval, or None if it straddles/touches 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __add__(self, other) -> "RationalInterval":
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        other = _frac(other)
        return RationalInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> "RationalInterval":
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "RationalInterval":
        return self + (-other)

    def __rsub__(self, other) -> "RationalInterval":
        return (-self) + other

    def __mul__(self, other) -> "RationalInterval":
        if isinstance(other, RationalInterval):
            prods = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
            return RationalInterval(min(prods), max(prods))
        other = _frac(other)
        a, b = self.lo * other, self.hi * other
        return RationalInterval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def square(self) -> "RationalInterval":
        if self.lo >= 0:
            return RationalInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return RationalInterval(self.hi * self.hi, self.lo * self.lo)
        return RationalInterval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def sqrt(self, bits: int = 64) -> "RationalInterval":
        """Outer enclosure of the square root of a nonnegative interval."""
        if self.lo < 0:
            raise ValueError("square root of an interval with negative part")
        return RationalInterval(sqrt_lower(self.lo, bits), sqrt_upper(self.hi, bits))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic rational s >= sqrt(q)."""
    q = _frac(q)
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    r = isqrt(q.numerator * scale // q.denominator) + 1
    return Fraction(r, 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic rational s <= sqrt(q)."""
    q = _frac(q)
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    r = isqrt(q.numerator * scale // q.denominator)
    return Fraction(r, 1 << bits)


@dataclass(frozen=True)
class ComplexBox:
    """Product of a real-part interval and an imaginary-part interval."""

    re: RationalInterval
    im: RationalInterval

    @classmethod
    def point(cls, re, im=0) -> "ComplexBox":
        return cls(RationalInterval.point(re), RationalInterval.point(im))

    @classmethod
    def from_disk(cls, center: tuple[Fraction, Fraction], radius: Fraction) -> "ComplexBox":
        c_re, c_im = center
        return cls(RationalInterval(c_re - radius, c_re + radius),
                   RationalInterval(c_im - radius, c_im + radius))

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def contains(self, re, im) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def contains_box(self, other: "ComplexBox") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def __add__(self, other) -> "ComplexBox":
        if isinstance(other, ComplexBox):
            return ComplexBox(self.re + other.re, self.im + other.im)
        return ComplexBox(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexBox":
        return ComplexBox(-self.re, -self.im)

    def __sub__(self, other) -> "ComplexBox":
        return self + (-other)

    def __mul__(self, other) -> "ComplexBox":
        if isinstance(other, ComplexBox):
            return ComplexBox(self.re * other.re - self.im * other.im,
                              self.re * other.im + self.im * other.re)
        return ComplexBox(self.re * other, self.im * other)

    __rmul__ = __mul__

    def abs2(self) -> RationalInterval:
        return self.re.square() + self.im.square()

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))

    def __repr__(self) -> str:
        return f"Box(re={self.re!r}, im={self.im!r})"

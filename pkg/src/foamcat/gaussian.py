"""Exact arithmetic in the Gaussian integers Z[i].

Z[i] is a Euclidean domain under the norm N(a+bi) = a^2 + b^2, which is what
makes exact integral homology possible downstream: division with remainder
satisfies N(r) <= N(y)/2, so Smith reduction terminates.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianInteger:
    """An element a + b*i of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = int(re)
        self.im = int(im)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "GaussianInteger":
        return GaussianInteger(0, 0)

    @staticmethod
    def one() -> "GaussianInteger":
        return GaussianInteger(1, 0)

    @staticmethod
    def i() -> "GaussianInteger":
        return GaussianInteger(0, 1)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GaussianInteger(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianInteger(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianInteger(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInteger(-self.re, -self.im)

    def conjugate(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.re == other and self.im == 0
        if not isinstance(other, GaussianInteger):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- Euclidean structure -------------------------------------------------

    def inverse_unit(self) -> "GaussianInteger":
        """Inverse, defined only for the four units 1, -1, i, -i."""
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[i]")
        return self.conjugate()

    def canonical_associate(self) -> "GaussianInteger":
        """The unique associate u*self (u a unit) with re > 0 and im >= 0.

        Zero maps to zero.  This pins a printable representative of each
        ideal, e.g. 2i -> 2 and -1+i -> 1+i.
        """
        z = self
        if z.is_zero():
            return z
        for _ in range(4):
            if z.re > 0 and z.im >= 0:
                return z
            z = GaussianInteger(-z.im, z.re)  # multiply by i
        raise AssertionError("unreachable")

    def unit_to_canonical(self) -> "GaussianInteger":
        """The unit u with u*self == self.canonical_associate()."""
        z, u = self, GaussianInteger.one()
        if z.is_zero():
            return u
        for _ in range(4):
            if z.re > 0 and z.im >= 0:
                return u
            z = GaussianInteger(-z.im, z.re)
            u = u * GaussianInteger.i()
        raise AssertionError("unreachable")

    def divides(self, other: "GaussianInteger") -> bool:
        if self.is_zero():
            return other.is_zero()
        q, r = gaussian_divmod(other, self)
        return r.is_zero()

    def exact_div(self, other: "GaussianInteger") -> "GaussianInteger":
        """self / other, raising if the division is not exact."""
        q, r = gaussian_divmod(self, other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    # -- presentation --------------------------------------------------------

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        imag = "i" if mag == 1 else f"{mag}i"
        return f"{re}{sign}{imag}"

    def __repr__(self):
        return f"GaussianInteger({self.re}, {self.im})"


def _coerce(x) -> GaussianInteger:
    if isinstance(x, GaussianInteger):
        return x
    if isinstance(x, int):
        return GaussianInteger(x, 0)
    raise TypeError(f"cannot coerce {x!r} into Z[i]")


def _round_ties_down(fr: Fraction) -> int:
    """Nearest integer; exact halves round toward the smaller integer."""
    n, d = fr.numerator, fr.denominator  # d > 0
    q, r = divmod(n, d)
    if 2 * r > d:
        return q + 1
    return q


def gaussian_divmod(x, y) -> tuple[GaussianInteger, GaussianInteger]:
    """Division with remainder in Z[i]: x = q*y + r with N(r) <= N(y)/2.

    The quotient is the exact complex quotient rounded to a nearest Gaussian
    integer, with .5 ties broken toward the smaller re, then smaller im, so
    every downstream reduction (Smith form in particular) is reproducible.
    """
    x, y = _coerce(x), _coerce(y)
    if y.is_zero():
        raise ZeroDivisionError("division by zero in Z[i]")
    n = y.norm()
    t = x * y.conjugate()
    q = GaussianInteger(
        _round_ties_down(Fraction(t.re, n)),
        _round_ties_down(Fraction(t.im, n)),
    )
    r = x - q * y
    return q, r


def gaussian_gcd(x: GaussianInteger, y: GaussianInteger) -> GaussianInteger:
    """A greatest common divisor, returned as canonical associate."""
    a, b = _coerce(x), _coerce(y)
    while not b.is_zero():
        _, r = gaussian_divmod(a, b)
        a, b = b, r
    return a.canonical_associate()


ZERO = GaussianInteger.zero()
ONE = GaussianInteger.one()
I = GaussianInteger.i()

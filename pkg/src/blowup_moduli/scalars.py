"""Exact scalars: Gaussian rationals and a single quadratic extension.

All arithmetic in the library is exact.  The base field is Q(i), modelled
as a pair of ``fractions.Fraction``.  Eigenvalues of 2x2 matrices may live
in a quadratic extension Q(i)(sqrt(D)); ``QuadExtScalar`` carries one such
extension and collapses back to Q(i) whenever D is a perfect square.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

from .errors import NotSplitOverQi

_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(rf"^({_RAT})(?:({_RAT})i)?$|^({_RAT})i$")


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None when x is not a square."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


class GaussianRational:
    """An element re + im*i of Q(i), always in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    # -- structure ----------------------------------------------------

    def __eq__(self, other):
        other = as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus; rational, so comparable exactly."""
        return self.re * self.re + self.im * self.im

    def is_rational(self) -> bool:
        return self.im == 0

    # -- text form ----------------------------------------------------

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = str(self.im)
        if not im.startswith("-"):
            im = "+" + im
        return f"{self.re}{im}i"

    def __repr__(self):
        return f"GaussianRational({self})"


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


def gaussian(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def parse_scalar(text: str) -> GaussianRational:
    """Parse "p/q", "p/q+r/si" or "r/si" (lowest-terms output regardless)."""
    m = _SCALAR_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise ValueError(f"malformed scalar {text!r}")
    try:
        if m.group(3) is not None:
            return GaussianRational(0, Fraction(m.group(3)))
        re_part = Fraction(m.group(1))
        im_part = Fraction(m.group(2)) if m.group(2) else Fraction(0)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in scalar {text!r}") from None
    return GaussianRational(re_part, im_part)


def format_scalar(z: GaussianRational) -> str:
    return str(z)


def gaussian_sqrt(z: GaussianRational) -> GaussianRational | None:
    """A w in Q(i) with w*w == z, or None when no such element exists.

    For w = u + vi the equations u^2 - v^2 = re(z), u^2 + v^2 = |z| force
    u^2 = (re(z) + |z|)/2, so existence reduces to two rational square
    detections (|z| itself, then u^2 or v^2).
    """
    if not z:
        return GaussianRational(0)
    n = rational_sqrt(z.abs2())
    if n is None:
        return None
    u2 = (z.re + n) / 2
    u = rational_sqrt(u2)
    if u is None:
        return None
    if u != 0:
        w = GaussianRational(u, z.im / (2 * u))
    else:
        v = rational_sqrt(-z.re)
        if v is None:
            return None
        w = GaussianRational(0, v)
    return w if w * w == z else None


class QuadExtScalar:
    """a + b*sqrt(disc) with a, b in Q(i) and one fixed discriminant.

    ``disc is None`` means the value lies in Q(i) itself (b == 0).  Mixing
    two genuinely different discriminants raises NotSplitOverQi: nested
    extensions are out of scope.
    """

    __slots__ = ("a", "b", "disc")

    def __init__(self, a=0, b=0, disc=None):
        a = _coerce_base(a)
        b = _coerce_base(b)
        if disc is not None:
            disc = _coerce_base(disc)
        if disc is not None and b:
            root = gaussian_sqrt(disc)
            if root is not None:
                a = a + b * root
                b = GaussianRational(0)
                disc = None
        if not b:
            b = GaussianRational(0)
            disc = None
        if b and disc is None:
            raise ValueError("irrational part without a discriminant")
        self.a, self.b, self.disc = a, b, disc

    # -- helpers ------------------------------------------------------

    def is_rational(self) -> bool:
        return self.disc is None

    def to_gaussian(self) -> GaussianRational:
        if self.disc is not None:
            raise NotSplitOverQi(f"{self} does not lie in Q(i)")
        return self.a

    @staticmethod
    def sqrt_of(disc) -> "QuadExtScalar":
        return QuadExtScalar(0, 1, disc)

    def _join(self, other) -> "GaussianRational | None":
        """Common discriminant for arithmetic, or raise on a true mix."""
        if self.disc is None:
            return other.disc
        if other.disc is None or other.disc == self.disc:
            return self.disc
        raise NotSplitOverQi(
            f"cannot mix extensions sqrt({self.disc}) and sqrt({other.disc})"
        )

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadExtScalar(self.a + other.a, self.b + other.b, self._join(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadExtScalar(self.a - other.a, self.b - other.b, self._join(other))

    def __rsub__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join(other)
        a = self.a * other.a
        if self.b and other.b:
            a = a + self.b * other.b * d
        return QuadExtScalar(a, self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join(other)
        if not other.b:
            if not other.a:
                raise ZeroDivisionError("division by zero")
            return QuadExtScalar(self.a / other.a, self.b / other.a, d)
        # 1/(p + q sqrt(d)) = (p - q sqrt(d)) / (p^2 - q^2 d)
        denom = other.a * other.a - other.b * other.b * d
        if not denom:
            raise ZeroDivisionError("division by zero in quadratic extension")
        conj = QuadExtScalar(other.a / denom, -other.b / denom, d)
        return self * conj

    def __rtruediv__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return QuadExtScalar(-self.a, -self.b, self.disc)

    # -- structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        other = as_quadext(other)
        if other is NotImplemented:
            return NotImplemented
        if self.disc == other.disc:
            return self.a == other.a and self.b == other.b
        if self.disc is None or other.disc is None:
            return False
        ratio = gaussian_sqrt(self.disc / other.disc)
        if ratio is None:
            return False
        return self.a == other.a and self.b * ratio == other.b

    def __hash__(self):
        if self.disc is None:
            return hash((self.a.re, self.a.im))
        # hash via the minimal polynomial, stable across square rescalings
        norm = self.a * self.a - self.b * self.b * self.disc
        return hash((self.a.re, self.a.im, norm.re, norm.im, "quad"))

    def __str__(self):
        if self.disc is None:
            return str(self.a)
        return f"({self.a})+({self.b})*sqrt({self.disc})"

    def __repr__(self):
        return f"QuadExtScalar({self})"


def _coerce_base(x) -> GaussianRational:
    g = as_gaussian(x)
    if g is NotImplemented:
        raise TypeError(f"cannot build a scalar from {x!r}")
    return g


def as_quadext(x) -> QuadExtScalar:
    if isinstance(x, QuadExtScalar):
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return QuadExtScalar(x)
    return NotImplemented

"""Seeded random configuration generators for property checks.

Everything takes an explicit ``random.Random`` so that suites are
reproducible bit-for-bit from a seed.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .gluing import BlowupCenters, default_delta
from .monad import Config0, Config1, scalar_config0, scalar_config1
from .matrices import MatrixC
from .scalars import GaussianRational, gaussian


def random_rational(rng: Random, span=4, den=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_gaussian(rng: Random, span=4, den=3) -> GaussianRational:
    return gaussian(random_rational(rng, span, den), random_rational(rng, span, den))


def random_matrix(rng: Random, rows, cols, span=4) -> MatrixC:
    return MatrixC(
        [[random_gaussian(rng, span) for _ in range(cols)] for _ in range(rows)]
    )


def orthogonal_framing(rng: Random, r=2, allow_zero=False):
    """A pair (b row, c column) with b . c = 0, both nonzero by default."""
    b = [random_gaussian(rng) for _ in range(r)]
    if not any(b):
        b[0] = gaussian(1)
    t = random_gaussian(rng)
    if not t and not allow_zero:
        t = gaussian(1)
    if r < 2:
        return b, [gaussian(0)] * r
    c = [-b[1] * t, b[0] * t] + [gaussian(0)] * (r - 2)
    if not any(c) and not allow_zero:
        c = [-b[1], b[0]] + [gaussian(0)] * (r - 2)
        if not any(c):
            b = [gaussian(1)] + b[1:]
            c = [gaussian(0), gaussian(1)] + [gaussian(0)] * (r - 2)
    return b, c


def random_k1_config0(rng: Random, r=2, zero=None) -> Config0:
    """Integrable charge-one plane configuration (b . c = 0)."""
    b, c = orthogonal_framing(rng, r)
    if zero == "b":
        b = [gaussian(0)] * r
    elif zero == "c":
        c = [gaussian(0)] * r
    return scalar_config0(random_gaussian(rng), random_gaussian(rng), b, c)


def random_k1_config1(rng: Random, r=2, d=None, zero=None) -> Config1:
    """Integrable effective charge-one blow-up configuration."""
    b, c = orthogonal_framing(rng, r)
    if zero == "b":
        b = [gaussian(0)] * r
    elif zero == "c":
        c = [gaussian(0)] * r
    a1 = random_gaussian(rng)
    a2 = random_gaussian(rng)
    if not any(b) and not a1 and not a2:
        a1 = gaussian(1)
    dval = random_gaussian(rng) if d is None else d
    return scalar_config1(a1, a2, dval, b, c)


def small_offset(rng: Random, delta: Fraction) -> GaussianRational:
    """A Gaussian rational with |offset| < delta, bounded away from the rim."""
    den = 8
    while Fraction(2, den * den) >= delta * delta:
        den *= 2
    return gaussian(Fraction(rng.randint(-1, 1), den), Fraction(rng.randint(-1, 1), den))


def standard_centers() -> BlowupCenters:
    return BlowupCenters((0, 0), (1, 0))


def random_nz_member(rng: Random, center, delta, r=2, zero=None) -> Config0:
    """Charge-one plane configuration with a1 inside the ball at center."""
    cfg = random_k1_config0(rng, r=r, zero=zero)
    a1 = center[0] + small_offset(rng, delta)
    return scalar_config0(a1, random_gaussian(rng), cfg.b.row(0), cfg.c.col(0))


def random_nprime_member(rng: Random, delta, r=2, zero=None) -> Config1:
    """Charge-one blow-up configuration with |d a1| < delta."""
    cfg = random_k1_config1(rng, r=r, zero=zero)
    a1 = gaussian(1) + small_offset(rng, Fraction(1, 2))
    d = small_offset(rng, delta) / a1
    return scalar_config1(a1, random_gaussian(rng), d, cfg.b.row(0), cfg.c.col(0))


def random_s0_member(rng: Random, delta, r=2) -> Config1:
    """A d = 0 charge-one blow-up configuration with small a1."""
    cfg = random_k1_config1(rng, r=r, d=gaussian(0))
    a1 = small_offset(rng, delta)
    return scalar_config1(a1, random_gaussian(rng), 0, cfg.b.row(0), cfg.c.col(0))


def random_n0_pair(rng: Random, centers: BlowupCenters, delta=None):
    """Factors for the plane gluing: one charge in each ball."""
    d = delta if delta is not None else default_delta(centers)
    mL = random_nz_member(rng, centers.xL, d)
    mR = random_nz_member(rng, centers.xR, d)
    return mL, mR

"""Maps between configuration spaces attached to blowing up two points.

The plane carries charge-two configurations; blowing up at x_L and x_R
localises charge near the two centers.  This module implements the
pullback and direct-image maps, the translation, the block gluing maps
(one charge near each center) together with their exact inverses, the
classification of configurations arriving from the two-sided gluing
locus, membership tests for the cover pieces, and the deformation
retractions used to identify that locus.

Conventions: a configuration "over the blow-up at x" is written in
coordinates translated so that x is the origin.  z = x_R - x_L is the
right center seen from the left chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import (
    EigenvalueCollision,
    InconsistentPair,
    NotInNL,
    NotIntegrable,
    NotSplitOverQi,
)
from .matrices import MatrixC, eig2, inverse
from .monad import (
    Config0,
    Config1,
    canonical_form_k1,
    group_act,
    integrability_defect,
    scalar_config0,
    scalar_config1,
)
from .scalars import GaussianRational, as_gaussian


def _gpair(x) -> tuple[GaussianRational, GaussianRational]:
    x1, x2 = x
    g1, g2 = as_gaussian(x1), as_gaussian(x2)
    if g1 is NotImplemented or g2 is NotImplemented:
        raise TypeError("centers must be Gaussian rational pairs")
    return (g1, g2)


@dataclass(frozen=True)
class BlowupCenters:
    """The two blow-up centers, with x1L != x1R (a first-coordinate
    separation; arrange it by a linear change of coordinates)."""

    xL: tuple
    xR: tuple

    def __post_init__(self):
        object.__setattr__(self, "xL", _gpair(self.xL))
        object.__setattr__(self, "xR", _gpair(self.xR))
        if self.xL[0] == self.xR[0]:
            raise ValueError("centers must differ in the first coordinate")

    @property
    def z(self):
        return (self.xR[0] - self.xL[0], self.xR[1] - self.xL[1])

    @property
    def z_mirror(self):
        return (self.xL[0] - self.xR[0], self.xL[1] - self.xR[1])


@dataclass(frozen=True)
class NeighborhoodSpec:
    """An open ball of rational radius; membership compares squared norms."""

    delta: Fraction
    center: object = GaussianRational(0)

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        c = self.center
        if isinstance(c, tuple):
            object.__setattr__(self, "center", _gpair(c))
        else:
            g = as_gaussian(c)
            if g is NotImplemented:
                raise TypeError("center must be a Gaussian rational or a pair")
            object.__setattr__(self, "center", g)

    def _scalar_center(self) -> GaussianRational:
        return self.center[0] if isinstance(self.center, tuple) else self.center

    def contains(self, x) -> bool:
        diff = as_gaussian(x) - self._scalar_center()
        return diff.abs2() < self.delta * self.delta


def default_delta(centers: BlowupCenters) -> Fraction:
    """A radius with 4*delta < |z1|, so the two balls stay disjoint."""
    s = centers.z[0].abs2() / 17
    num, den = s.numerator, s.denominator
    approx = Fraction(isqrt(num * den), den)
    if approx <= 0:
        approx = Fraction(1, 4 * den)
    return approx


def neighborhoods_left(centers: BlowupCenters, delta=None):
    """Ball pair (around 0, around z1) for the left chart."""
    d = Fraction(delta) if delta is not None else default_delta(centers)
    return (NeighborhoodSpec(d, GaussianRational(0)), NeighborhoodSpec(d, centers.z[0]))


def neighborhoods_right(centers: BlowupCenters, delta=None):
    d = Fraction(delta) if delta is not None else default_delta(centers)
    return (
        NeighborhoodSpec(d, GaussianRational(0)),
        NeighborhoodSpec(d, centers.z_mirror[0]),
    )


# -- elementary maps -----------------------------------------------------------


def _shift(m: MatrixC, x) -> MatrixC:
    return m - MatrixC.identity(m.rows).scale(x)


def pullback_blowup(m: Config0, x) -> Config1:
    """Pull a plane configuration back to the blow-up at x."""
    x1, x2 = _gpair(x)
    return Config1(
        _shift(m.a1, x1), _shift(m.a2, x2), MatrixC.identity(m.k), m.b, m.c
    )


def direct_image(m: Config1) -> Config0:
    """Push a blow-up configuration down to the plane."""
    return Config0(m.d * m.a1, m.d * m.a2, m.d * m.b, m.c)


def translate_tau(m: Config0, x) -> Config0:
    """Translate the plane so that x moves to the origin."""
    x1, x2 = _gpair(x)
    return Config0(_shift(m.a1, x1), _shift(m.a2, x2), m.b, m.c)


def untranslate(m: Config0, x) -> Config0:
    x1, x2 = _gpair(x)
    return translate_tau(m, (-x1, -x2))


def _require_integrable_defect(cfg, what):
    if not integrability_defect(cfg).is_zero():
        raise NotIntegrable(f"{what} factor fails the integrability identity")


# -- gluing maps ----------------------------------------------------------------


def boxplus0(mL: Config0, mR: Config0) -> Config0:
    """Glue two charge-one plane configurations into a charge-two one.

    Defined whenever the a1 scalars differ; extends to the closures (a
    factor may carry zero framing)."""
    if mL.k != 1 or mR.k != 1:
        raise ValueError("gluing takes charge-one factors")
    _require_integrable_defect(mL, "left")
    _require_integrable_defect(mR, "right")
    a1L, a1R = mL.a1[0, 0], mR.a1[0, 0]
    denom = a1R - a1L
    if not denom:
        raise EigenvalueCollision("a1 scalars coincide")
    p = (mL.b * mR.c).scale(1 / denom)  # 1x1
    q = (mR.b * mL.c).scale(-1 / denom)
    a2 = MatrixC([[mL.a2[0, 0], p[0, 0]], [q[0, 0], mR.a2[0, 0]]])
    return Config0(
        MatrixC.diag(a1L, a1R),
        a2,
        MatrixC.from_blocks([[mL.b], [mR.b]]),
        MatrixC.from_blocks([[mL.c, mR.c]]),
    )


def boxplusL(m1: Config1, m2: Config0) -> Config1:
    """Glue a blow-up charge (near the exceptional line) with a plane
    charge sitting near z."""
    if m1.k != 1 or m2.k != 1:
        raise ValueError("gluing takes charge-one factors")
    _require_integrable_defect(m1, "left")
    _require_integrable_defect(m2, "right")
    a1p, a2p, dp = m1.a1[0, 0], m1.a2[0, 0], m1.d[0, 0]
    a1pp, a2pp = m2.a1[0, 0], m2.a2[0, 0]
    denom = a1pp - dp * a1p
    if not denom:
        raise EigenvalueCollision("a1'' equals d' a1'")
    p = (m1.b * m2.c).scale(1 / denom)
    q = (m2.b * m1.c).scale(-1 / denom)
    a2 = MatrixC([[a2p, p[0, 0]], [q[0, 0], a2pp]])
    return Config1(
        MatrixC.diag(a1p, a1pp),
        a2,
        MatrixC.diag(dp, 1),
        MatrixC.from_blocks([[m1.b], [m2.b]]),
        MatrixC.from_blocks([[m1.c, m2.c]]),
    )


@dataclass(frozen=True)
class GluingFactors:
    m1: Config1 | Config0
    m2: Config0
    transform: tuple  # group element moving the input into block form


def _normalize_first(v):
    for x in v:
        if x:
            return tuple(y / x for y in v)
    return v


def _rational_eigendata(m: MatrixC):
    e = eig2(m)
    if not e.in_gaussians:
        raise NotSplitOverQi("eigenvalues leave Q(i)")
    if not e.distinct:
        raise NotInNL("coincident eigenvalues")
    values = [v.to_gaussian() for v in e.values]
    vectors = [
        _normalize_first(tuple(x.to_gaussian() for x in vec)) for vec in e.vectors
    ]
    return values, vectors


def _assign_to_neighborhoods(values, nb):
    nb0, nb1 = nb
    if nb0.contains(values[0]) and nb1.contains(values[1]):
        return 0, 1
    if nb0.contains(values[1]) and nb1.contains(values[0]):
        return 1, 0
    raise NotInNL("eigenvalues do not sit one in each neighborhood")


def boxplusL_inverse(m: Config1, nb) -> GluingFactors:
    """Factor a charge-two blow-up configuration through the gluing map.

    The eigenvalues of a1*d must be distinct, rational over Q(i), and
    sit one in each of the two balls ``nb`` (around 0 and around z1).
    The eigenvector bases are normalised by d(v1) = w1, which pins the
    block form down exactly; the returned transform g satisfies
    group_act(m, g) == boxplusL(m1, m2).
    """
    if m.k != 2:
        raise ValueError("gluing factorisation expects charge two")
    values, vectors = _rational_eigendata(m.a1 * m.d)
    i0, i1 = _assign_to_neighborhoods(values, nb)
    v0, v1 = vectors[i0], vectors[i1]
    dv1 = _apply(m.d, v1)
    if not any(dv1):
        raise NotInNL("d kills the eigenvector away from the exceptional center")
    w1 = dv1  # the coupling d(v1) = w1 normalises the second basis vector
    w_values, w_vectors = _rational_eigendata(m.d * m.a1)
    lam0 = values[i0]
    w0 = next(
        (w for lam, w in zip(w_values, w_vectors) if lam == lam0), None
    )
    if w0 is None or not (w0[0] * w1[1] - w0[1] * w1[0]):
        raise NotInNL("no eigenvector basis on the W side")
    g0 = MatrixC([[v0[0], v1[0]], [v0[1], v1[1]]])
    g1 = MatrixC([[w0[0], w1[0]], [w0[1], w1[1]]])
    t = group_act(m, (g0, g1))
    if t.a1[0, 1] or t.a1[1, 0] or t.d[0, 1] or t.d[1, 0]:
        raise NotInNL("configuration does not block-diagonalise")
    if t.d[1, 1] != GaussianRational(1):
        raise NotInNL("normalisation d(v1) = w1 failed")
    m1 = scalar_config1(t.a1[0, 0], t.a2[0, 0], t.d[0, 0], t.b.row(0), t.c.col(0))
    m2 = scalar_config0(t.a1[1, 1], t.a2[1, 1], t.b.row(1), t.c.col(1))
    return GluingFactors(m1, m2, (g0, g1))


def boxplus0_inverse(m: Config0, nb) -> GluingFactors:
    """Factor a charge-two plane configuration through the plane gluing."""
    values, vectors = _rational_eigendata(m.a1)
    i0, i1 = _assign_to_neighborhoods(values, nb)
    v0, v1 = vectors[i0], vectors[i1]
    g = MatrixC([[v0[0], v1[0]], [v0[1], v1[1]]])
    t = group_act(m, g)
    if t.a1[0, 1] or t.a1[1, 0]:
        raise NotInNL("a1 does not diagonalise")
    mL = scalar_config0(t.a1[0, 0], t.a2[0, 0], t.b.row(0), t.c.col(0))
    mR = scalar_config0(t.a1[1, 1], t.a2[1, 1], t.b.row(1), t.c.col(1))
    return GluingFactors(mL, mR, g)


def _apply(m: MatrixC, v):
    return tuple(
        sum((m[i, j] * v[j] for j in range(m.cols)), GaussianRational(0))
        for i in range(m.rows)
    )


def canonical_form_glued(m: Config1, nb) -> Config1:
    """Orbit representative of a glued charge-two configuration: factor,
    normalise each charge-one factor, reglue."""
    f = boxplusL_inverse(m, nb)
    return boxplusL(canonical_form_k1(f.m1), canonical_form_k1(f.m2))


# -- classification of the gluing locus ----------------------------------------


@dataclass(frozen=True)
class CImageClassification:
    in_image: bool
    reason: str
    factors: GluingFactors | None = None

    def __bool__(self):
        return self.in_image


def _eig_multiset_is(m: MatrixC, expect) -> bool:
    e = eig2(m)
    if not e.in_gaussians:
        return False
    vals = [v.to_gaussian() for v in e.values]
    want = [as_gaussian(x) for x in expect]
    if vals[0] == want[0] and vals[1] == want[1]:
        return True
    return vals[0] == want[1] and vals[1] == want[0]


def classify_C_image(m: Config1, centers: BlowupCenters, mirror=False) -> CImageClassification:
    """Decide whether m is the one-sided image of a two-sided glued point.

    The criterion: c d b = 0 and the eigenvalues of d a_i are exactly
    {0, z_i}.  On success the canonical block factorisation is returned;
    its plane factor is the ideal charge (z1, z2, 0-framing after the
    outer-product constraint) and its blow-up factor has d' = 0.
    """
    if m.k != 2:
        raise ValueError("classification expects charge two")
    z1, z2 = centers.z_mirror if mirror else centers.z
    cdb = m.c * m.d * m.b
    if not cdb.is_zero():
        return CImageClassification(False, "c d b != 0")
    if not _eig_multiset_is(m.d * m.a1, (0, z1)):
        return CImageClassification(False, "eigenvalues of d a1 differ from {0, z1}")
    if not _eig_multiset_is(m.d * m.a2, (0, z2)):
        return CImageClassification(False, "eigenvalues of d a2 differ from {0, z2}")
    half = abs(z1.abs2()) / 2
    delta = Fraction(isqrt(half.numerator * half.denominator), half.denominator)
    if delta <= 0:
        delta = Fraction(1, 2)
    nb = (NeighborhoodSpec(delta, GaussianRational(0)), NeighborhoodSpec(delta, z1))
    factors = boxplusL_inverse(m, nb)
    if factors.m1.d[0, 0]:
        return CImageClassification(False, "blow-up factor has nonzero d")
    outer = factors.m2.c * factors.m2.b  # r x r outer product
    if not outer.is_zero():
        return CImageClassification(False, "outer product c'' b'' != 0")
    if factors.m2.a1[0, 0] != z1 or factors.m2.a2[0, 0] != z2:
        return CImageClassification(False, "plane factor does not sit at z")
    return CImageClassification(True, "canonical block form reached", factors)


# -- membership -----------------------------------------------------------------


def membership(m, piece: str, nb=None) -> bool:
    """Exact membership tests for the cover pieces.

    S0: d = 0.  Nz: |a1 - center| < delta.  Nprime: |d a1| < delta.
    NL: the gluing factorisation succeeds for the ball pair ``nb``.
    All comparisons are strict and exact (squared norms).
    """
    if piece == "S0":
        if not isinstance(m, Config1):
            raise TypeError("S0 is a condition on blow-up configurations")
        return m.d.is_zero()
    if piece == "Nz":
        if not isinstance(m, Config0) or m.k != 1:
            raise TypeError("Nz is a condition on charge-one plane configurations")
        return nb.contains(m.a1[0, 0])
    if piece == "Nprime":
        if not isinstance(m, Config1) or m.k != 1:
            raise TypeError("Nprime is a condition on charge-one blow-up configurations")
        return nb.contains(m.d[0, 0] * m.a1[0, 0])
    if piece == "NL":
        if not isinstance(m, Config1) or m.k != 2:
            raise TypeError("NL is a condition on charge-two blow-up configurations")
        try:
            boxplusL_inverse(m, nb)
            return True
        except (NotInNL, NotSplitOverQi):
            return False
    raise ValueError(f"unknown cover piece {piece!r}")


# -- homotopies -----------------------------------------------------------------


def _check_t(t) -> Fraction:
    t = Fraction(t)
    if t < 0 or t > 1:
        raise ValueError("homotopy parameter must lie in [0, 1]")
    return t


def homotopy_hxy(m: Config0, t, x1, x2) -> Config0:
    """Slide a charge-one plane configuration toward the point (x1, x2),
    scaling the framing away: at t = 0 only the ideal point remains."""
    t = _check_t(t)
    if m.k != 1:
        raise ValueError("this homotopy acts on charge-one plane configurations")
    x1, x2 = as_gaussian(x1), as_gaussian(x2)
    t2 = GaussianRational(t * t)
    s = GaussianRational(1 - t * t)
    return Config0(
        m.a1.scale(t2) + MatrixC([[x1 * s]]),
        m.a2.scale(t2) + MatrixC([[x2 * s]]),
        m.b.scale(GaussianRational(t)),
        m.c.scale(GaussianRational(t)),
    )


def homotopy_h1(m: Config1, t) -> Config1:
    """Scale d by t^2; at t = 0 the configuration lands in the d = 0 slice."""
    t = _check_t(t)
    if m.k != 1:
        raise ValueError("this homotopy acts on charge-one blow-up configurations")
    return Config1(m.a1, m.a2, m.d.scale(GaussianRational(t * t)), m.b, m.c)


def homotopy_hl(m: Config1, t, z, nb) -> Config1:
    """Factor through the gluing, deform each factor, reglue, and return
    to the original basis (so t = 1 is the literal identity)."""
    t = _check_t(t)
    z1, z2 = _gpair(z)
    f = boxplusL_inverse(m, nb)
    glued = boxplusL(homotopy_h1(f.m1, t), homotopy_hxy(f.m2, t, z1, z2))
    g0, g1 = f.transform
    return group_act(glued, (inverse(g0), inverse(g1)))


def homotopy_h0(m: Config0, t, centers: BlowupCenters, nb=None) -> Config0:
    """Deform a charge-two plane configuration factor-wise toward the
    ideal configuration at the two centers."""
    t = _check_t(t)
    if nb is None:
        d = default_delta(centers)
        nb = (NeighborhoodSpec(d, centers.xL[0]), NeighborhoodSpec(d, centers.xR[0]))
    f = boxplus0_inverse(m, nb)
    glued = boxplus0(
        homotopy_hxy(f.m1, t, *centers.xL), homotopy_hxy(f.m2, t, *centers.xR)
    )
    return group_act(glued, inverse(f.transform))


def homotopy(m, variant: str, t, **kw):
    """Dispatch on the homotopy family: hxy, h1, hl or h0."""
    variant = variant.lower()
    if variant == "hxy":
        return homotopy_hxy(m, t, kw["x1"], kw["x2"])
    if variant == "h1":
        return homotopy_h1(m, t)
    if variant == "hl":
        centers = kw["centers"]
        nb = kw.get("nb") or neighborhoods_left(centers, kw.get("delta"))
        return homotopy_hl(m, t, centers.z, nb)
    if variant == "h0":
        return homotopy_h0(m, t, kw["centers"], kw.get("nb"))
    raise ValueError(f"unknown homotopy variant {variant!r}")


# -- two-sided points and the retraction onto the gluing locus ------------------


@dataclass(frozen=True)
class GluedPair:
    """A charge-two point over the doubly blown-up plane, recorded by its
    two one-sided images (left chart first).  Either side may be a
    completion configuration when the underlying sheaf degenerates on
    the opposite exceptional line."""

    left: Config1
    right: Config1
    centers: BlowupCenters


@dataclass(frozen=True)
class CPoint:
    """A point of the two-sided gluing locus: a pair of charge-one d = 0
    configurations, one per chart."""

    left: Config1
    right: Config1
    centers: BlowupCenters

    def __post_init__(self):
        for side in (self.left, self.right):
            if side.k != 1 or not side.d.is_zero():
                raise InconsistentPair("gluing-locus points carry charge-one d = 0 sides")


def glued_pair_from_plane(m: Config0, centers: BlowupCenters) -> GluedPair:
    """The two-sided representation of a plane configuration pulled back
    to the double blow-up."""
    return GluedPair(
        pullback_blowup(m, centers.xL), pullback_blowup(m, centers.xR), centers
    )


def _completion_rep(factors: GluingFactors, centers: BlowupCenters, mirror: bool) -> Config1:
    """Build the opposite chart's completion configuration for a one-sided
    point whose d'-factor vanishes: the genuine charge pulls back near the
    opposite center and an ideal unit sits on this chart's center."""
    here = centers.xR if mirror else centers.xL
    there = centers.xL if mirror else centers.xR
    m2_abs = untranslate(factors.m2, here)
    pulled = pullback_blowup(m2_abs, there)
    zm = (here[0] - there[0], here[1] - there[1])
    ideal = scalar_config0(zm[0], zm[1], [0] * factors.m2.r, [0] * factors.m2.r)
    return boxplusL(pulled, ideal)


def opposite_side(m: Config1, centers: BlowupCenters, mirror: bool, nb=None) -> Config1:
    """Derive the other chart's representation of the same glued point.

    ``mirror`` False means m lives on the left chart.  When the gluing
    factor has invertible d' the point comes from the plane and the other
    side is a plain pullback; otherwise it is a completion configuration.
    """
    if nb is None:
        nb = neighborhoods_right(centers) if mirror else neighborhoods_left(centers)
    f = boxplusL_inverse(m, nb)
    here = centers.xR if mirror else centers.xL
    there = centers.xL if mirror else centers.xR
    if f.m1.d[0, 0]:
        plane = untranslate(direct_image(boxplusL(f.m1, f.m2)), here)
        return pullback_blowup(plane, there)
    return _completion_rep(f, centers, mirror)


def glued_pair_from_left(m: Config1, centers: BlowupCenters, nb=None) -> GluedPair:
    return GluedPair(m, opposite_side(m, centers, False, nb), centers)


def glued_pair_from_right(m: Config1, centers: BlowupCenters, nb=None) -> GluedPair:
    return GluedPair(opposite_side(m, centers, True, nb), m, centers)


def _try_hl(m, t, z, nb):
    try:
        return homotopy_hl(m, t, z, nb)
    except (NotInNL, NotSplitOverQi):
        return None


def homotopy_H2(point, t, delta=None):
    """Two-sided retraction onto the gluing locus.

    Points of the locus are fixed for every t; elsewhere the deformation
    acts chart-wise through the gluing factorisation, and at t = 0 the
    result is a gluing-locus point.  Both chart-wise images of the output
    satisfy the one-sided deformation identities by construction.
    """
    t = _check_t(t)
    if isinstance(point, CPoint):
        return point
    if not isinstance(point, GluedPair):
        raise TypeError("expected a GluedPair or a CPoint")
    centers = point.centers
    nbL = neighborhoods_left(centers, delta)
    nbR = neighborhoods_right(centers, delta)
    in_c_left = classify_C_image(point.left, centers, mirror=False)
    in_c_right = classify_C_image(point.right, centers, mirror=True)
    if in_c_left and in_c_right:
        return point
    new_left = _try_hl(point.left, t, centers.z, nbL)
    new_right = _try_hl(point.right, t, centers.z_mirror, nbR)
    if new_left is None and new_right is None:
        raise InconsistentPair("neither side admits the gluing factorisation")
    if t == 0:
        # each chart only records its own charge-one part of a locus
        # point, so the limit needs both factorisations
        if new_left is None or new_right is None:
            raise InconsistentPair(
                "the gluing-locus limit needs both chart factorisations"
            )
        sL = boxplusL_inverse(new_left, nbL).m1
        sR = boxplusL_inverse(new_right, nbR).m1
        return CPoint(sL, sR, centers)
    if new_left is None:
        new_left = opposite_side(new_right, centers, True, nbR)
    if new_right is None:
        new_right = opposite_side(new_left, centers, False, nbL)
    return GluedPair(new_left, new_right, centers)


def pair_side_image(point, side: str) -> Config1:
    """The chart-wise image of a two-sided point, as a (possibly
    completion) charge-two configuration."""
    centers = point.centers
    if isinstance(point, GluedPair):
        return point.left if side == "left" else point.right
    if side == "left":
        s, z = point.left, centers.z
    else:
        s, z = point.right, centers.z_mirror
    ideal = scalar_config0(z[0], z[1], [0] * s.r, [0] * s.r)
    return boxplusL(s, ideal)

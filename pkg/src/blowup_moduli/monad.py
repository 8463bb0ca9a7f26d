"""ADHM configurations for the plane and the one-point blow-up.

A plane configuration is a 4-tuple (a1, a2, b, c); a blow-up
configuration is a 5-tuple (a1, a2, d, b, c).  The module provides the
integrability and effectiveness checks, the symbolic verification that
the associated two-step complex composes to zero, enumeration of special
subspaces (the degeneracy detectors), the group actions, and the
canonical reduction that splits off ideal charge as eigenvalue data.

Charge is limited to k <= 2 wherever eigen-analysis is required; that is
the only regime the rest of the library needs, and it keeps every
computation inside a single quadratic extension of Q(i).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ChargeTooLarge,
    NotIntegrable,
    NotSplitOverQi,
    ShapeMismatch,
    SingularGroupElement,
    SingularMatrix,
)
from .matrices import MatrixC, commutator, eig2, inverse, kernel_basis, rank
from .scalars import (
    GaussianRational,
    QuadExtScalar,
    as_quadext,
    format_scalar,
    gaussian_sqrt,
    parse_scalar,
)

_NVARS = 5  # monomial exponents in (x1, x2, x3, y1, y2)


@dataclass(frozen=True)
class Config0:
    """Plane configuration: a1, a2 in End(W), b: C^r -> W, c: W -> C^r."""

    a1: MatrixC
    a2: MatrixC
    b: MatrixC
    c: MatrixC

    def __post_init__(self):
        k = self.a1.rows
        if self.a1.shape() != (k, k) or self.a2.shape() != (k, k):
            raise ShapeMismatch("a1, a2 must be square of equal size")
        if self.b.rows != k or self.c.cols != k or self.b.cols != self.c.rows:
            raise ShapeMismatch("b must be k x r and c must be r x k")

    @property
    def k(self):
        return self.a1.rows

    @property
    def r(self):
        return self.b.cols


@dataclass(frozen=True)
class Config1:
    """Blow-up configuration: a1, a2: W -> V, d: V -> W, b: C^r -> V, c: W -> C^r."""

    a1: MatrixC
    a2: MatrixC
    d: MatrixC
    b: MatrixC
    c: MatrixC

    def __post_init__(self):
        k = self.a1.rows
        shapes_ok = (
            self.a1.shape() == (k, k)
            and self.a2.shape() == (k, k)
            and self.d.shape() == (k, k)
            and self.b.rows == k
            and self.c.cols == k
            and self.b.cols == self.c.rows
        )
        if not shapes_ok:
            raise ShapeMismatch("inconsistent configuration shapes")

    @property
    def k(self):
        return self.a1.rows

    @property
    def r(self):
        return self.b.cols


Config = Config0 | Config1


def scalar_config0(a1, a2, b_entries, c_entries) -> Config0:
    """Charge-one plane configuration from scalars and framing vectors."""
    return Config0(
        MatrixC([[a1]]),
        MatrixC([[a2]]),
        MatrixC.row_vector(b_entries),
        MatrixC.col_vector(c_entries),
    )


def scalar_config1(a1, a2, d, b_entries, c_entries) -> Config1:
    return Config1(
        MatrixC([[a1]]),
        MatrixC([[a2]]),
        MatrixC([[d]]),
        MatrixC.row_vector(b_entries),
        MatrixC.col_vector(c_entries),
    )


def empty_config(r: int, kind) -> Config:
    """The unique charge-zero configuration of rank r."""
    z = MatrixC.zeros(0, 0)
    b = MatrixC.zeros(0, r)
    c = MatrixC.zeros(r, 0)
    if kind is Config0:
        return Config0(z, z, b, c)
    return Config1(z, z, z, b, c)


def integrability_defect(cfg: Config) -> MatrixC:
    if isinstance(cfg, Config0):
        return commutator(cfg.a1, cfg.a2) + cfg.b * cfg.c
    return cfg.a1 * cfg.d * cfg.a2 - cfg.a2 * cfg.d * cfg.a1 + cfg.b * cfg.c


def effective(cfg: Config1) -> bool:
    """Do the columns of [a1 | a2 | b] span V?"""
    if cfg.k == 0:
        return True
    stacked = MatrixC.from_blocks([[cfg.a1, cfg.a2, cfg.b]])
    return rank(stacked) == cfg.k


def integrable(cfg: Config) -> bool:
    """Integrability condition; for blow-up configurations this includes
    the effectiveness requirement."""
    if not integrability_defect(cfg).is_zero():
        return False
    if isinstance(cfg, Config1):
        return effective(cfg)
    return True


# -- the symbolic complex -----------------------------------------------------


class MonadPolynomial:
    """Matrix-valued polynomial in the section variables x1, x2, x3, y1, y2.

    When ``reduce_relation`` is set the monomial x1*y1 is rewritten to
    -x2*y2, the relation cutting out the blow-up inside the product of
    projective spaces.  Normal form: no term divisible by x1*y1.
    """

    def __init__(self, shape, terms=None, reduce_relation=False):
        self.shape = shape
        self.reduce_relation = reduce_relation
        self.terms = {}
        for exps, coeff in (terms or {}).items():
            self._accumulate(tuple(exps), coeff)

    def _accumulate(self, exps, coeff):
        if coeff.shape() != self.shape:
            raise ShapeMismatch("coefficient shape differs from polynomial shape")
        if self.reduce_relation and exps[0] >= 1 and exps[3] >= 1:
            e = list(exps)
            e[0] -= 1
            e[3] -= 1
            e[1] += 1
            e[4] += 1
            self._accumulate(tuple(e), -coeff)
            return
        acc = self.terms.get(exps)
        total = coeff if acc is None else acc + coeff
        if total.is_zero():
            self.terms.pop(exps, None)
        else:
            self.terms[exps] = total

    def coefficient(self, exps) -> MatrixC:
        return self.terms.get(tuple(exps), MatrixC.zeros(*self.shape))

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, other: "MonadPolynomial") -> "MonadPolynomial":
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatch("polynomial shapes not composable")
        out = MonadPolynomial(
            (self.shape[0], other.shape[1]),
            reduce_relation=self.reduce_relation or other.reduce_relation,
        )
        for e1, m1 in self.terms.items():
            for e2, m2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out._accumulate(e, m1 * m2)
        return out

    def __eq__(self, other):
        if not isinstance(other, MonadPolynomial):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def monomials(self):
        return sorted(self.terms)

    def __repr__(self):
        names = ("x1", "x2", "x3", "y1", "y2")
        parts = []
        for exps in self.monomials():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            parts.append(mono or "1")
        return f"MonadPolynomial({self.shape}, monomials=[{', '.join(parts)}])"


def _mono(i):
    e = [0] * _NVARS
    e[i] = 1
    return tuple(e)


def monad_maps(cfg: Config) -> tuple[MonadPolynomial, MonadPolynomial]:
    """The symbolic maps (A, B) of the two-step complex attached to cfg."""
    k, r = cfg.k, cfg.r
    if isinstance(cfg, Config0):
        i_k = MatrixC.identity(k)
        z_kk = MatrixC.zeros(k, k)
        z_rk = MatrixC.zeros(r, k)
        a = MonadPolynomial(
            (2 * k + r, k),
            {
                _mono(0): MatrixC.from_blocks([[i_k], [z_kk], [z_rk]]),
                _mono(1): MatrixC.from_blocks([[z_kk], [i_k], [z_rk]]),
                _mono(2): MatrixC.from_blocks([[-cfg.a1], [-cfg.a2], [cfg.c]]),
            },
        )
        b = MonadPolynomial(
            (k, 2 * k + r),
            {
                _mono(0): MatrixC.from_blocks([[z_kk, i_k, MatrixC.zeros(k, r)]]),
                _mono(1): MatrixC.from_blocks([[-i_k, z_kk, MatrixC.zeros(k, r)]]),
                _mono(2): MatrixC.from_blocks([[cfg.a2, -cfg.a1, cfg.b]]),
            },
        )
        return a, b

    i_k = MatrixC.identity(k)
    z = MatrixC.zeros(k, k)
    z_rk = MatrixC.zeros(r, k)
    z_kr = MatrixC.zeros(k, r)
    da1, da2 = cfg.d * cfg.a1, cfg.d * cfg.a2
    # source (W, V); target rows (V, W, V, W, C^r)
    a = MonadPolynomial(
        (4 * k + r, 2 * k),
        {
            _mono(0): MatrixC.from_blocks([[z, z], [i_k, z], [z, z], [z, z], [z_rk, z_rk]]),
            _mono(1): MatrixC.from_blocks([[z, z], [z, z], [z, z], [i_k, z], [z_rk, z_rk]]),
            _mono(2): MatrixC.from_blocks(
                [[cfg.a1, z], [-da1, z], [cfg.a2, z], [-da2, z], [cfg.c, z_rk]]
            ),
            _mono(3): MatrixC.from_blocks([[z, z], [z, z], [z, i_k], [z, z], [z_rk, z_rk]]),
            _mono(4): MatrixC.from_blocks([[z, -i_k], [z, z], [z, z], [z, z], [z_rk, z_rk]]),
        },
        reduce_relation=True,
    )
    b = MonadPolynomial(
        (2 * k, 4 * k + r),
        {
            _mono(0): MatrixC.from_blocks([[z, z, -i_k, z, z_kr], [z, z, z, z, z_kr]]),
            _mono(1): MatrixC.from_blocks([[i_k, z, z, z, z_kr], [z, z, z, z, z_kr]]),
            _mono(2): MatrixC.from_blocks(
                [[z, cfg.a2, z, -cfg.a1, cfg.b], [z, z, z, z, z_kr]]
            ),
            _mono(3): MatrixC.from_blocks([[z, z, z, z, z_kr], [cfg.d, i_k, z, z, z_kr]]),
            _mono(4): MatrixC.from_blocks([[z, z, z, z, z_kr], [z, z, cfg.d, i_k, z_kr]]),
        },
        reduce_relation=True,
    )
    return a, b


def monad_residual(cfg: Config) -> MonadPolynomial:
    """B o A as a matrix polynomial; zero exactly when cfg is integrable
    (for blow-up configurations, zero modulo x1*y1 + x2*y2)."""
    a, b = monad_maps(cfg)
    return b * a


# -- special subspaces & non-degeneracy ---------------------------------------


@dataclass(frozen=True)
class SpecialSubspace:
    """An invariant subspace witnessing degeneracy.

    ``basis`` spans W'.  For blow-up configurations ``v_basis`` spans the
    partner V' of the pair (V', W').  An empty basis is the zero subspace
    (detected when b = 0); a full basis is all of W (detected when c = 0).
    """

    kind: str  # "b" or "c"
    basis: tuple
    v_basis: tuple | None = None

    @property
    def dim(self):
        return len(self.basis)


def _vec(m: MatrixC, v):
    """Apply a matrix to a plain vector of scalars."""
    return tuple(
        sum((m[i, j] * v[j] for j in range(m.cols)), as_quadext(0))
        for i in range(m.rows)
    )


def _cross(v, w):
    return as_quadext(v[0]) * as_quadext(w[1]) - as_quadext(v[1]) * as_quadext(w[0])


def _is_zero_vec(v):
    return all(not as_quadext(x) for x in v)


def _in_line(line, v) -> bool:
    """Is v contained in the span of the 2-vector ``line``?"""
    try:
        return not _cross(line, v)
    except NotSplitOverQi:
        return False


def _lines_equal(v, w) -> bool:
    try:
        return not _cross(v, w)
    except NotSplitOverQi:
        return False


def _normalize_line(v):
    v = tuple(as_quadext(x) for x in v)
    for i, x in enumerate(v):
        if x:
            return tuple(y / x for y in v)
    return None


def _add_line(lines, v):
    if v is None or _is_zero_vec(v):
        return
    v = tuple(as_quadext(x) for x in v)
    if not any(_lines_equal(v, w) for w in lines):
        lines.append(v)


def _is_scalar_matrix(m: MatrixC) -> bool:
    return m.rows == 2 and m[0, 1] == m[1, 0] == GaussianRational(0) and m[0, 0] == m[1, 1]


def _invariant_line_candidates(m1: MatrixC, m2: MatrixC):
    """Candidate common invariant lines of a pair of 2x2 matrices.

    A common invariant line of a non-scalar matrix is one of its (at
    most two) eigen-lines, possibly over a quadratic extension.  When
    both matrices are scalar every line is invariant and the coordinate
    lines stand in as representatives.
    """
    lines = []
    for m in (m1, m2):
        if not _is_scalar_matrix(m):
            for v in eig2(m).vectors:
                _add_line(lines, v)
            return lines
    _add_line(lines, (as_quadext(1), as_quadext(0)))
    _add_line(lines, (as_quadext(0), as_quadext(1)))
    return lines


def _rank1_direction(m: MatrixC):
    """A nonzero column direction, when m has rank one."""
    if rank(m) != 1:
        return None
    for j in range(m.cols):
        col = m.col(j)
        if not _is_zero_vec(col):
            return tuple(col)
    return None


def _full_basis(k):
    return tuple(
        tuple(as_quadext(1 if i == j else 0) for j in range(k)) for i in range(k)
    )


def _columns_in_line(m: MatrixC, line) -> bool:
    return all(_in_line(line, m.col(j)) for j in range(m.cols))


def special_subspaces(cfg: Config) -> list[SpecialSubspace]:
    """All proper nontrivial special subspaces (pairs, for the blow-up).

    For k = 2 these are lines (pairs of lines); the enumeration covers
    the algebraic closure through quadratic extensions.  When b = 0 or
    c = 0 whole families of invariant lines can be special; the list
    then carries representatives together with the flagged extreme
    subspace 0 (b-special) or W (c-special), which already witnesses
    degeneracy.
    """
    if cfg.k > 2:
        raise ChargeTooLarge(f"special subspaces implemented for k <= 2, got {cfg.k}")
    out = []
    if cfg.k == 0:
        return out
    pair = isinstance(cfg, Config1)
    if cfg.b.is_zero():
        out.append(SpecialSubspace("b", (), () if pair else None))
    if cfg.c.is_zero():
        full = _full_basis(cfg.k)
        out.append(SpecialSubspace("c", full, full if pair else None))
    if cfg.k == 2:
        if isinstance(cfg, Config0):
            out.extend(_config0_special_lines(cfg))
        else:
            out.extend(_config1_special_pairs(cfg))
    return out


def _config0_special_lines(cfg: Config0):
    lines = _invariant_line_candidates(cfg.a1, cfg.a2)
    _add_line(lines, _rank1_direction(cfg.b))
    if rank(cfg.c) == 1:
        for v in kernel_basis(cfg.c):
            _add_line(lines, tuple(v))
    found = []
    for line in lines:
        try:
            invariant = _in_line(line, _vec(cfg.a1, line)) and _in_line(
                line, _vec(cfg.a2, line)
            )
            if not invariant:
                continue
            if _columns_in_line(cfg.b, line):
                found.append(SpecialSubspace("b", (line,)))
            if _is_zero_vec(_vec(cfg.c, line)):
                found.append(SpecialSubspace("c", (line,)))
        except NotSplitOverQi:
            continue
    return found


def _perp_functional(v):
    """A 1x2 functional vanishing exactly on span(v)."""
    return (as_quadext(v[1]), -as_quadext(v[0]))


def _apply_functional(phi, v):
    return phi[0] * as_quadext(v[0]) + phi[1] * as_quadext(v[1])


def _kernel_lines(rows):
    """Lines in the kernel of a stack of 1x2 functionals."""
    try:
        m = MatrixC([[x for x in row] for row in rows])
        return [tuple(v) for v in kernel_basis(m)]
    except NotSplitOverQi:
        return []


def _config1_special_pairs(cfg: Config1):
    a1, a2, d = cfg.a1, cfg.a2, cfg.d
    w_cands = _invariant_line_candidates(d * a1, d * a2)
    if rank(cfg.c) == 1:
        for v in kernel_basis(cfg.c):
            _add_line(w_cands, tuple(v))
    v_cands = _invariant_line_candidates(a1 * d, a2 * d)
    _add_line(v_cands, _rank1_direction(cfg.b))
    # image/preimage closure keeps the candidate set complete for any
    # pair forced by a nonzero framing vector
    for w in list(w_cands):
        try:
            _add_line(v_cands, _vec(a1, w))
            _add_line(v_cands, _vec(a2, w))
        except NotSplitOverQi:
            pass
    for v in list(v_cands):
        try:
            _add_line(w_cands, _vec(d, v))
            phi = _perp_functional(v)
            rows = [
                [_apply_functional(phi, a1.col(0)), _apply_functional(phi, a1.col(1))],
                [_apply_functional(phi, a2.col(0)), _apply_functional(phi, a2.col(1))],
            ]
            for w in _kernel_lines(rows):
                _add_line(w_cands, w)
        except NotSplitOverQi:
            pass
    for w in list(w_cands):
        try:
            psi = _perp_functional(w)
            rows = [[_apply_functional(psi, d.col(0)), _apply_functional(psi, d.col(1))]]
            for v in _kernel_lines(rows):
                _add_line(v_cands, v)
        except NotSplitOverQi:
            pass

    found = []
    for v in v_cands:
        for w in w_cands:
            try:
                base_ok = (
                    _in_line(v, _vec(a1, w))
                    and _in_line(v, _vec(a2, w))
                    and _in_line(w, _vec(d, v))
                )
                if not base_ok:
                    continue
                if _columns_in_line(cfg.b, v):
                    found.append(SpecialSubspace("b", (w,), (v,)))
                if _is_zero_vec(_vec(cfg.c, w)):
                    found.append(SpecialSubspace("c", (w,), (v,)))
            except NotSplitOverQi:
                continue
    # dedupe projectively
    unique = []
    for s in found:
        dup = any(
            s.kind == t.kind
            and _lines_equal(s.basis[0], t.basis[0])
            and _lines_equal(s.v_basis[0], t.v_basis[0])
            for t in unique
        )
        if not dup:
            unique.append(s)
    return unique


def nondegenerate(cfg: Config) -> bool:
    """No proper special subspace exists (so the monad maps have full rank)."""
    return not special_subspaces(cfg)


# -- group action --------------------------------------------------------------


def group_act(cfg: Config, g):
    """Base-change action; preserves integrability and all orbit invariants.

    For plane configurations g is a single invertible k x k matrix; for
    blow-up configurations pass a pair (g0, g1) acting on (V, W).
    """
    try:
        if isinstance(cfg, Config0):
            gi = inverse(g)
            return Config0(gi * cfg.a1 * g, gi * cfg.a2 * g, gi * cfg.b, cfg.c * g)
        g0, g1 = g
        g0i = inverse(g0)
        g1i = inverse(g1)
        return Config1(
            g0i * cfg.a1 * g1,
            g0i * cfg.a2 * g1,
            g1i * cfg.d * g0,
            g0i * cfg.b,
            cfg.c * g1,
        )
    except SingularMatrix as exc:
        raise SingularGroupElement(str(exc)) from None


# -- canonical reduction -------------------------------------------------------


def _normalize_mu(mu):
    mu = tuple(as_quadext(x) for x in mu)
    for i, x in enumerate(mu):
        if x:
            return tuple(y / x for y in mu)
    return None


@dataclass(frozen=True)
class DUPoint:
    """A unit of ideal charge: an eigenvalue pair, plus an exceptional
    direction [mu1 : mu2] on the blow-up."""

    surface: str  # "plane" | "blowup"
    l1: QuadExtScalar
    l2: QuadExtScalar
    mu: tuple | None = None

    def incidence_ok(self) -> bool:
        """On the blow-up, (l1, l2) must lie on the line with normal mu."""
        if self.surface == "plane" or self.mu is None:
            return True
        if not self.l1 and not self.l2:
            return True
        return not (self.l1 * self.mu[0] + self.l2 * self.mu[1])

    def shifted(self, x1, x2) -> "DUPoint":
        return DUPoint(self.surface, self.l1 + x1, self.l2 + x2, self.mu)


def plane_point(l1, l2) -> DUPoint:
    return DUPoint("plane", as_quadext(l1), as_quadext(l2))


def blowup_point(l1, l2, mu) -> DUPoint:
    return DUPoint("blowup", as_quadext(l1), as_quadext(l2), _normalize_mu(mu))


def same_point_multiset(xs, ys) -> bool:
    """Exact multiset equality of DUPoints (no hashing; lists are tiny)."""
    ys = list(ys)
    if len(xs) != len(ys):
        return False
    for x in xs:
        for i, y in enumerate(ys):
            if x == y:
                del ys[i]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Reduction:
    reduced: Config
    diagonal: Config
    points: tuple


def _ratio(image, v):
    """lambda with image == lambda * v, for parallel vectors."""
    for i, x in enumerate(v):
        x = as_quadext(x)
        if x:
            lam = as_quadext(image[i]) / x
            return lam
    raise ValueError("ratio against the zero vector")


def _extend_to_basis(v):
    """Return g = [v | u] invertible with a coordinate complement u."""
    v = tuple(as_quadext(x) for x in v)
    for u in ((as_quadext(1), as_quadext(0)), (as_quadext(0), as_quadext(1))):
        if _cross(v, u):
            return MatrixC([[v[0], u[0]], [v[1], u[1]]])
    raise ValueError("cannot extend the zero vector")


def _as_gaussian_vec(v):
    out = []
    for x in v:
        x = as_quadext(x)
        if not x.is_rational():
            raise NotSplitOverQi("basis vector leaves Q(i)")
        out.append(x.to_gaussian())
    return tuple(out)


def _plane_ideal_points(a1: MatrixC, a2: MatrixC):
    """Joint spectrum pairs of two commuting 2x2 matrices."""
    if _is_scalar_matrix(a1) and _is_scalar_matrix(a2):
        pt = plane_point(a1[0, 0], a2[0, 0])
        return [pt, pt]
    lead, other = (a1, a2) if not _is_scalar_matrix(a1) else (a2, a1)
    e = eig2(lead)
    v = e.vectors[0]
    lam_lead = e.values[0]
    img = _vec(other, v)
    if not _in_line(v, img):
        raise NotIntegrable("matrices do not commute; no joint spectrum")
    lam_other = _ratio(img, v) if not _is_zero_vec(img) else as_quadext(0)
    tr_lead = as_quadext(lead[0, 0] + lead[1, 1])
    tr_other = as_quadext(other[0, 0] + other[1, 1])
    first = (lam_lead, lam_other)
    second = (tr_lead - lam_lead, tr_other - lam_other)
    if lead is a1:
        return [plane_point(*first), plane_point(*second)]
    return [plane_point(first[1], first[0]), plane_point(second[1], second[0])]


def _blowup_point_from_scalars(a1, a2, d) -> DUPoint:
    a1, a2, d = as_quadext(a1), as_quadext(a2), as_quadext(d)
    if not a1 and not a2:
        raise NotIntegrable("ideal charge with no a-action: direction undetermined")
    return blowup_point(d * a1, d * a2, (a2, -a1))


def _pencil_parallel_lines(a1: MatrixC, a2: MatrixC):
    """Lines w with a1(w) parallel to a2(w): roots of a binary quadratic."""
    e1 = (as_quadext(1), as_quadext(0))
    e2 = (as_quadext(0), as_quadext(1))
    c11, c12 = _vec(a1, e1), _vec(a2, e1)
    c21, c22 = _vec(a1, e2), _vec(a2, e2)
    qa = _cross(c11, c12)
    qc = _cross(c21, c22)
    qb = _cross(c11, c22) + _cross(c21, c12)
    if not qa and not qb and not qc:
        return [e1, e2]
    roots = []
    if not qa:
        # w2 * (qb w1 + qc w2) = 0
        roots.append(e1)
        if qc:
            roots.append((_normalize_line((qc, -qb)) or e1))
        return roots
    qa_g = qa.to_gaussian()
    qb_g = qb.to_gaussian()
    qc_g = qc.to_gaussian()
    disc = qb_g * qb_g - 4 * qa_g * qc_g
    root = gaussian_sqrt(disc)
    half = GaussianRational(1) / 2
    if root is not None:
        t1 = as_quadext((-qb_g + root) * half / qa_g)
        t2 = as_quadext((-qb_g - root) * half / qa_g)
    else:
        t1 = QuadExtScalar(-qb_g * half / qa_g, half / qa_g, disc)
        t2 = QuadExtScalar(-qb_g * half / qa_g, -half / qa_g, disc)
    roots.append((t1, as_quadext(1)))
    if t1 != t2:
        roots.append((t2, as_quadext(1)))
    return roots


def _blowup_ideal_points(a1: MatrixC, a2: MatrixC, d: MatrixC):
    """Two exceptional-charge points of a fully ideal 2x2 triple."""
    roots = _pencil_parallel_lines(a1, a2)
    w1 = roots[0]
    w2 = roots[1] if len(roots) > 1 else None
    if w2 is None or _lines_equal(w1, w2):
        w2 = next(
            u
            for u in ((as_quadext(1), as_quadext(0)), (as_quadext(0), as_quadext(1)))
            if _cross(w1, u)
        )
    points = []
    img11, img21 = _vec(a1, w1), _vec(a2, w1)
    base = img11 if not _is_zero_vec(img11) else img21
    if _is_zero_vec(base):
        raise NotIntegrable("ideal charge with no a-action: direction undetermined")
    alpha11 = _ratio(img11, base) if not _is_zero_vec(img11) else as_quadext(0)
    alpha21 = _ratio(img21, base) if not _is_zero_vec(img21) else as_quadext(0)
    dv = _vec(d, base)
    if not _in_line(w1, dv):
        raise NotIntegrable("triple is not simultaneously reducible")
    delta1 = _ratio(dv, w1) if not _is_zero_vec(dv) else as_quadext(0)
    points.append(blowup_point(delta1 * alpha11, delta1 * alpha21, (alpha21, -alpha11)))
    # second slot: coefficients along a complement of span(base)
    img12 = _vec(a1, w2)
    img22 = _vec(a2, w2)
    if (not _is_zero_vec(img12) or not _is_zero_vec(img22)) and (
        (_is_zero_vec(img12) or _in_line(base, img12))
        and (_is_zero_vec(img22) or _in_line(base, img22))
    ):
        # images collapse into span(base): V is not spanned
        raise NotIntegrable("ideal block not effective")
    base2 = img12 if not (_is_zero_vec(img12) or _in_line(base, img12)) else img22
    if _is_zero_vec(base2):
        raise NotIntegrable("ideal charge with no a-action: direction undetermined")
    psi = _perp_functional(base)
    denom = _apply_functional(psi, base2)
    alpha12 = _apply_functional(psi, img12) / denom
    alpha22 = _apply_functional(psi, img22) / denom
    dv2 = _vec(d, base2)
    psi_w = _perp_functional(w1)
    denom_w = _apply_functional(psi_w, w2)
    delta2 = _apply_functional(psi_w, dv2) / denom_w
    points.append(blowup_point(delta2 * alpha12, delta2 * alpha22, (alpha22, -alpha12)))
    return points


def _diag_config_from_points(points, r, kind) -> Config:
    n = len(points)
    if kind is Config0:
        return Config0(
            MatrixC.diag(*(p.l1 for p in points)),
            MatrixC.diag(*(p.l2 for p in points)),
            MatrixC.zeros(n, r),
            MatrixC.zeros(r, n),
        )
    # diagonal blow-up data: record (alpha_i, delta) with delta*alpha_i = lambda_i
    a1d, a2d, dd = [], [], []
    for p in points:
        mu = p.mu or (as_quadext(0), as_quadext(1))
        alpha = (mu[1], -mu[0])  # perpendicular to mu, normalized direction
        a1d.append(alpha[0])
        a2d.append(alpha[1])
        if alpha[0]:
            dd.append(p.l1 / alpha[0])
        elif alpha[1]:
            dd.append(p.l2 / alpha[1])
        else:
            dd.append(as_quadext(0))
    return Config1(
        MatrixC.diag(*a1d),
        MatrixC.diag(*a2d),
        MatrixC.diag(*dd),
        MatrixC.zeros(n, r),
        MatrixC.zeros(r, n),
    )


def _pick_rational_special(specials):
    for s in specials:
        if s.dim != 1:
            continue
        try:
            w = _as_gaussian_vec(s.basis[0])
            v = _as_gaussian_vec(s.v_basis[0]) if s.v_basis else None
            return s.kind, w, v
        except NotSplitOverQi:
            continue
    return None


def canonical_reduction(cfg: Config) -> Reduction:
    """Split cfg into a non-degenerate part plus diagonalised ideal charge.

    Returns (reduced, diagonal, points).  A non-degenerate configuration
    comes back unchanged with no points; otherwise each unit of split-off
    charge appears as a DUPoint (an eigenvalue pair, with an exceptional
    direction on the blow-up).
    """
    if cfg.k > 2:
        raise ChargeTooLarge("canonical reduction implemented for k <= 2")
    if not integrable(cfg):
        raise NotIntegrable("configuration is not integrable")
    kind = type(cfg)
    if cfg.k == 0 or nondegenerate(cfg):
        return Reduction(cfg, empty_config(cfg.r, kind), ())

    if cfg.k == 1:
        if isinstance(cfg, Config0):
            pt = plane_point(cfg.a1[0, 0], cfg.a2[0, 0])
        else:
            pt = _blowup_point_from_scalars(cfg.a1[0, 0], cfg.a2[0, 0], cfg.d[0, 0])
        return Reduction(
            empty_config(cfg.r, kind), _diag_config_from_points([pt], cfg.r, kind), (pt,)
        )

    # k == 2
    if cfg.b.is_zero() or cfg.c.is_zero():
        if isinstance(cfg, Config0):
            points = _plane_ideal_points(cfg.a1, cfg.a2)
        else:
            points = _blowup_ideal_points(cfg.a1, cfg.a2, cfg.d)
        return Reduction(
            empty_config(cfg.r, kind),
            _diag_config_from_points(points, cfg.r, kind),
            tuple(points),
        )

    picked = _pick_rational_special(special_subspaces(cfg))
    if picked is None:
        raise NotSplitOverQi("no special subspace with coordinates in Q(i)")
    skind, w, v = picked
    if isinstance(cfg, Config0):
        gw = _extend_to_basis(w)
        if skind == "c":  # special line goes in slot 2
            gw = MatrixC([[gw[0, 1], gw[0, 0]], [gw[1, 1], gw[1, 0]]])
        t = group_act(cfg, gw)
        reduced_cand = Config0(
            MatrixC([[t.a1[0, 0]]]),
            MatrixC([[t.a2[0, 0]]]),
            MatrixC.row_vector(t.b.row(0)),
            MatrixC.col_vector(t.c.col(0)),
        )
        ideal_pt = plane_point(t.a1[1, 1], t.a2[1, 1])
    else:
        gv = _extend_to_basis(v)
        gw = _extend_to_basis(w)
        if skind == "c":
            gv = MatrixC([[gv[0, 1], gv[0, 0]], [gv[1, 1], gv[1, 0]]])
            gw = MatrixC([[gw[0, 1], gw[0, 0]], [gw[1, 1], gw[1, 0]]])
        t = group_act(cfg, (gv, gw))
        reduced_cand = Config1(
            MatrixC([[t.a1[0, 0]]]),
            MatrixC([[t.a2[0, 0]]]),
            MatrixC([[t.d[0, 0]]]),
            MatrixC.row_vector(t.b.row(0)),
            MatrixC.col_vector(t.c.col(0)),
        )
        ideal_pt = _blowup_point_from_scalars(t.a1[1, 1], t.a2[1, 1], t.d[1, 1])
    if isinstance(reduced_cand, Config1) and not effective(reduced_cand):
        raise NotIntegrable("reduced block is not effective")
    sub = canonical_reduction(reduced_cand)
    points = tuple(sub.points) + (ideal_pt,)
    return Reduction(sub.reduced, _diag_config_from_points(points, cfg.r, kind), points)


def du_points(cfg: Config) -> tuple:
    return canonical_reduction(cfg).points


# -- canonical representatives of charge-one orbits ----------------------------


def _first_nonzero(entries):
    for i, x in enumerate(entries):
        if x:
            return i, x
    return None, None


def canonical_form_k1(cfg: Config) -> Config:
    """Scale-normalised representative of a charge-one orbit.

    Plane: the residual C* rescales (b, c) to (b/s, s c); the first
    nonzero entry of b (else of c) is normalised to 1.  Blow-up: the
    torus (C*)^2 acts with weights recorded on (a, d, b, c); d (else a1,
    else a2) is normalised to 1 before the framing is scaled.
    """
    if cfg.k != 1:
        raise ChargeTooLarge("canonical form only for charge one")
    if isinstance(cfg, Config0):
        _, s = _first_nonzero(cfg.b.row(0))
        if s is not None:
            return Config0(cfg.a1, cfg.a2, cfg.b.scale(1 / s), cfg.c.scale(s))
        _, s = _first_nonzero(cfg.c.col(0))
        if s is not None:
            return Config0(cfg.a1, cfg.a2, cfg.b, cfg.c.scale(1 / s))
        return cfg

    a1, a2, d = cfg.a1[0, 0], cfg.a2[0, 0], cfg.d[0, 0]
    b_row, c_col = cfg.b.row(0), cfg.c.col(0)
    one = GaussianRational(1)
    # step 1: fix the ratio u/s
    if d:
        ratio = one / d  # s/u, so that d -> 1; a_i pick up the inverse weight
        a1 = a1 * d
        a2 = a2 * d
        d = one
    elif a1:
        ratio = a1  # u/s = 1/a1 i.e. s/u = a1
        a2 = a2 / a1
        a1 = one
    elif a2:
        ratio = a2
        a2 = one
    else:
        # b and c scale independently
        _, s = _first_nonzero(b_row)
        if s is not None:
            b_row = [x / s for x in b_row]
        _, u = _first_nonzero(c_col)
        if u is not None:
            c_col = [x / u for x in c_col]
        return scalar_config1(a1, a2, d, b_row, c_col)
    # step 2: one common scale s remains; b -> b/s, c -> (s/ratio') c with
    # the combination fixed so that b (else c) is normalised
    _, s = _first_nonzero(b_row)
    if s is not None:
        b_row = [x / s for x in b_row]
        c_col = [x * s / ratio for x in c_col]
    else:
        _, t = _first_nonzero(c_col)
        if t is not None:
            c_col = [x / t for x in c_col]
    return scalar_config1(a1, a2, d, b_row, c_col)


# -- JSON ----------------------------------------------------------------------


def matrix_to_json(m: MatrixC):
    return [[format_scalar(x) for x in row] for row in m.data]


def matrix_from_json(rows, cols=None) -> MatrixC:
    return MatrixC([[parse_scalar(x) for x in row] for row in rows], cols=cols)


def config_to_json(cfg: Config) -> dict:
    out = {
        "kind": "config0" if isinstance(cfg, Config0) else "config1",
        "k": cfg.k,
        "r": cfg.r,
        "a1": matrix_to_json(cfg.a1),
        "a2": matrix_to_json(cfg.a2),
        "b": matrix_to_json(cfg.b),
        "c": matrix_to_json(cfg.c),
    }
    if isinstance(cfg, Config1):
        out["d"] = matrix_to_json(cfg.d)
    return out


def config_from_json(data: dict) -> Config:
    k = int(data["k"])
    r = int(data["r"])
    a1 = matrix_from_json(data["a1"], cols=k)
    a2 = matrix_from_json(data["a2"], cols=k)
    b = matrix_from_json(data["b"], cols=r)
    c = matrix_from_json(data["c"], cols=k)
    if data["kind"] == "config0":
        return Config0(a1, a2, b, c)
    if data["kind"] == "config1":
        return Config1(a1, a2, matrix_from_json(data["d"], cols=k), b, c)
    raise ValueError(f"unknown configuration kind {data['kind']!r}")

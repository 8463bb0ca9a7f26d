"""Covers of the moduli spaces and their cohomology spectral sequences.

A ``CoverDescription`` records the nerve of an open cover (faces indexed
by vertex subsets), an even-graded ring per face, and the signed
restriction maps between incident faces.  ``compute_pages`` turns this
into integer matrices degree by degree, computes the second page over Z
via Smith normal form, and assembles the Betti table of the total space.

Two covers are built in: the charge-one cover with one piece per
blow-up point (any q), and the three-piece charge-two cover for two
blow-up points with the restriction maps dictated by the tautological
bundle identities.  ``closed_form_betti`` and ``simplex_assembly_betti``
provide two independent routes to the same tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .errors import NonCollapsing
from .graded import (
    DirectSum,
    FreeRing,
    GradedRing,
    MonomialIdeal,
    RingMap,
    hilbert,
    kernel_hilbert,
    map_from_json,
    map_matrix,
    map_to_json,
    monomial_basis,
    ring_from_json,
    ring_to_json,
)
from .matrices import (
    as_object_array,
    integer_rank,
    lattice_contains,
    snf_invariants,
)


@dataclass(frozen=True)
class Face:
    name: str
    vertices: tuple
    ring: GradedRing

    @property
    def dim(self):
        return len(self.vertices) - 1


@dataclass(frozen=True)
class Arrow:
    source: str  # face of dimension p
    target: str  # face of dimension p + 1
    rmap: RingMap  # restriction, sign included


@dataclass
class CoverDescription:
    name: str
    faces: list
    arrows: list
    _by_name: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_name = {f.name: f for f in self.faces}
        if len(self._by_name) != len(self.faces):
            raise ValueError("face names must be unique")
        for a in self.arrows:
            s, t = self._by_name[a.source], self._by_name[a.target]
            if t.dim != s.dim + 1:
                raise ValueError(f"arrow {a.source}->{a.target} skips a dimension")

    def face(self, name) -> Face:
        return self._by_name[name]

    @property
    def depth(self):
        return max(f.dim for f in self.faces)

    def faces_of_dim(self, p):
        return [f for f in self.faces if f.dim == p]

    def column_dimension(self, p, n) -> int:
        return sum(len(monomial_basis(f.ring, n)) for f in self.faces_of_dim(p))

    def d1_matrix(self, p, n) -> np.ndarray:
        """Signed restriction matrix from column p to column p+1 at degree n."""
        sources = self.faces_of_dim(p)
        targets = self.faces_of_dim(p + 1)
        src_offsets, pos = {}, 0
        for f in sources:
            src_offsets[f.name] = pos
            pos += len(monomial_basis(f.ring, n))
        tgt_offsets, tpos = {}, 0
        for f in targets:
            tgt_offsets[f.name] = tpos
            tpos += len(monomial_basis(f.ring, n))
        mat = np.zeros((tpos, pos), dtype=object)
        for a in self.arrows:
            if a.source not in src_offsets or a.target not in tgt_offsets:
                continue
            block = map_matrix(a.rmap, n)
            r0 = tgt_offsets[a.target]
            c0 = src_offsets[a.source]
            if block.size:
                mat[r0 : r0 + block.shape[0], c0 : c0 + block.shape[1]] += block
        return mat


@dataclass(frozen=True)
class BettiTable:
    """Per-degree free rank and torsion invariants of a graded Z-module."""

    ranks: tuple
    torsion: tuple

    def __init__(self, ranks, torsion=None):
        object.__setattr__(self, "ranks", tuple(int(x) for x in ranks))
        if torsion is None:
            torsion = [()] * len(self.ranks)
        object.__setattr__(self, "torsion", tuple(tuple(t) for t in torsion))
        if len(self.torsion) != len(self.ranks):
            raise ValueError("rank and torsion tables must align")

    @property
    def maxdeg(self):
        return len(self.ranks) - 1

    def rank(self, n) -> int:
        return self.ranks[n]

    def torsion_free(self) -> bool:
        return all(not t for t in self.torsion)

    def tsv(self) -> str:
        lines = ["degree\trank\ttorsion"]
        for n, (r, t) in enumerate(zip(self.ranks, self.torsion)):
            lines.append(f"{n}\t{r}\t{','.join(str(x) for x in t) if t else '-'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "degrees": [
                {"degree": n, "rank": r, "torsion": list(t)}
                for n, (r, t) in enumerate(zip(self.ranks, self.torsion))
            ]
        }

    @classmethod
    def from_json(cls, data) -> "BettiTable":
        rows = sorted(data["degrees"], key=lambda d: d["degree"])
        return cls([d["rank"] for d in rows], [d["torsion"] for d in rows])


# -- built-in covers ------------------------------------------------------------


def _cech_sign(face_vertices, added) -> int:
    """Alternating sign for inserting ``added`` into a sorted vertex tuple."""
    position = sorted(face_vertices).index(added)
    return -1 if position % 2 else 1


def build_cover_charge1(q: int) -> CoverDescription:
    """The charge-one cover: one piece per blow-up point.

    Vertex i carries Z[u_i, v_i] (two degree-2 classes); every deeper
    face carries the single class w of the common plane piece.  The
    restriction to any intersection kills v_i and sends u_i to w; maps
    between intersections are the identity.  The nerve is a full simplex
    and all of it is kept: truncating it would distort the second page
    for q >= 4.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    plane_ring = GradedRing([("w", 2)])
    if q == 0:
        return CoverDescription("charge1-q0", [Face("U", (0,), plane_ring)], [])
    faces = []
    vertex_rings = {}
    for i in range(1, q + 1):
        ring = GradedRing([(f"u{i}", 2), (f"v{i}", 2)])
        vertex_rings[i] = ring
        faces.append(Face(f"U{i}", (i,), ring))
    for size in range(2, q + 1):
        for subset in combinations(range(1, q + 1), size):
            faces.append(Face("U" + "".join(map(str, subset)), subset, plane_ring))
    arrows = []
    ident = {"w": {(1,): 1}}
    for f in faces:
        if f.dim + 1 > q - 1:
            continue
        for j in range(1, q + 1):
            if j in f.vertices:
                continue
            bigger = tuple(sorted(f.vertices + (j,)))
            target = "U" + "".join(map(str, bigger))
            sign = _cech_sign(bigger, j)
            if f.dim == 0:
                i = f.vertices[0]
                images = {f"u{i}": {(1,): 1}, f"v{i}": {}}
                rmap = RingMap(vertex_rings[i], plane_ring, images, sign)
            else:
                rmap = RingMap(plane_ring, plane_ring, ident, sign)
            arrows.append(Arrow(f.name, target, rmap))
    return CoverDescription(f"charge1-q{q}", faces, arrows)


AL_RING = GradedRing([("aD1L", 2), ("ab1L", 2), ("aD2L", 4), ("ab2L", 4)])
AR_RING = GradedRing([("aD1R", 2), ("ab1R", 2), ("aD2R", 4), ("ab2R", 4)])
N2_RING = GradedRing([("cDL", 2), ("cbL", 2), ("cDR", 2), ("cbR", 2)])
A0_RING = GradedRing([("a1", 2), ("a2", 4)])
NL_RING = GradedRing([("nDL", 2), ("nbL", 2), ("n0R", 2)])
NR_RING = GradedRing([("nDR", 2), ("nbR", 2), ("n0L", 2)])
N0_RING = GradedRing([("n0L", 2), ("n0R", 2)])


def build_cover_charge2_q2() -> CoverDescription:
    """The three-piece charge-two cover for two blow-up points.

    Vertices: the two one-sided pieces (rank-two tautological classes in
    the difference/plain basis) and the neighbourhood of the gluing
    locus (four line classes).  Edges and the triple intersection carry
    the restriction maps induced by the tautological-bundle splittings;
    signs follow the orientation convention fixed by d1 o d1 = 0.
    """
    faces = [
        Face("AL", (0,), AL_RING),
        Face("AR", (1,), AR_RING),
        Face("N2", (2,), N2_RING),
        Face("A0", (0, 1), A0_RING),
        Face("NL", (0, 2), NL_RING),
        Face("NR", (1, 2), NR_RING),
        Face("N0", (0, 1, 2), N0_RING),
    ]

    def rmap(src, tgt, images, sign):
        return RingMap(src, tgt, images, sign)

    arrows = [
        # vertex -> edge
        Arrow("AL", "A0", rmap(AL_RING, A0_RING, {
            "aD1L": {}, "ab1L": {(1, 0): 1}, "aD2L": {}, "ab2L": {(0, 1): 1},
        }, 1)),
        Arrow("AR", "A0", rmap(AR_RING, A0_RING, {
            "aD1R": {}, "ab1R": {(1, 0): 1}, "aD2R": {}, "ab2R": {(0, 1): 1},
        }, 1)),
        Arrow("AL", "NL", rmap(AL_RING, NL_RING, {
            "aD1L": {(1, 0, 0): 1},
            "ab1L": {(0, 1, 0): 1, (0, 0, 1): 1},
            "aD2L": {(1, 0, 1): 1},
            "ab2L": {(0, 1, 1): 1},
        }, -1)),
        Arrow("AR", "NR", rmap(AR_RING, NR_RING, {
            "aD1R": {(1, 0, 0): 1},
            "ab1R": {(0, 1, 0): 1, (0, 0, 1): 1},
            "aD2R": {(1, 0, 1): 1},
            "ab2R": {(0, 1, 1): 1},
        }, -1)),
        Arrow("N2", "NL", rmap(N2_RING, NL_RING, {
            "cDL": {(1, 0, 0): 1},
            "cbL": {(0, 1, 0): 1},
            "cDR": {},
            "cbR": {(0, 0, 1): 1},
        }, 1)),
        Arrow("N2", "NR", rmap(N2_RING, NR_RING, {
            "cDL": {},
            "cbL": {(0, 0, 1): 1},
            "cDR": {(1, 0, 0): 1},
            "cbR": {(0, 1, 0): 1},
        }, -1)),
        # edge -> triple intersection
        Arrow("A0", "N0", rmap(A0_RING, N0_RING, {
            "a1": {(1, 0): 1, (0, 1): 1},
            "a2": {(1, 1): 1},
        }, 1)),
        Arrow("NL", "N0", rmap(NL_RING, N0_RING, {
            "nDL": {}, "nbL": {(1, 0): 1}, "n0R": {(0, 1): 1},
        }, 1)),
        Arrow("NR", "N0", rmap(NR_RING, N0_RING, {
            "nDR": {}, "nbR": {(0, 1): 1}, "n0L": {(1, 0): 1},
        }, 1)),
    ]
    return CoverDescription("charge2-q2", faces, arrows)


# -- the page computation --------------------------------------------------------


@dataclass(frozen=True)
class DegreeData:
    """Second-page data of one internal degree n."""

    n: int
    e1_dims: tuple
    e2_ranks: tuple
    e2_torsion: tuple
    top_surjective: bool


@dataclass(frozen=True)
class PageReport:
    cover_name: str
    maxdeg: int
    degrees: tuple
    betti: BettiTable
    collapse_failures: tuple = ()

    def degree(self, n) -> DegreeData:
        return self.degrees[n]


def _column_homology(dims, mats, n):
    """E2 ranks and torsion for one degree from the row of d1 matrices.

    One Smith normal form per matrix yields both the rank and the
    torsion of the incoming cokernel, which is exactly the torsion of
    the middle homology (torsion classes of ker/im already lie in the
    full cokernel)."""
    torsions = [snf_invariants(m) if m.size else [] for m in mats]
    ranks = [len(t) for t in torsions]
    e2_ranks, e2_tors = [], []
    for p, dim in enumerate(dims):
        out_rank = ranks[p] if p < len(mats) else 0
        in_rank = ranks[p - 1] if p >= 1 else 0
        in_torsion = [d for d in (torsions[p - 1] if p >= 1 else []) if d != 1]
        e2_ranks.append(dim - out_rank - in_rank)
        e2_tors.append(tuple(in_torsion))
    return e2_ranks, e2_tors


def compute_pages(cover: CoverDescription, maxdeg: int, strict: bool = True) -> PageReport:
    """Run the cover's spectral sequence through its second page.

    Per internal degree: assemble the signed restriction matrices, check
    they compose to zero, and compute kernel/image/cokernel data over Z.
    Odd internal degrees are empty (all rings are evenly generated); a
    nonzero entry above column zero contributing to an odd total degree
    contradicts the expected collapse and raises NonCollapsing (with
    ``strict`` off it is recorded in the report instead).  The Betti
    table sums the surviving column-p entries into total degree p + n.
    """
    depth = cover.depth
    degrees = []
    ranks = [0] * (maxdeg + 1)
    torsion = [[] for _ in range(maxdeg + 1)]
    failures = []
    for n in range(maxdeg + 1):
        dims = [cover.column_dimension(p, n) for p in range(depth + 1)]
        if n % 2 == 1:
            if any(dims):
                raise NonCollapsing(f"odd internal degree {n} is not empty")
            degrees.append(DegreeData(n, tuple(dims), (0,) * (depth + 1), ((),) * (depth + 1), True))
            continue
        mats = [cover.d1_matrix(p, n) for p in range(depth)]
        for p in range(depth - 1):
            if mats[p].size and mats[p + 1].size:
                prod = mats[p + 1] @ mats[p]
                if (prod != 0).any():
                    raise NonCollapsing(f"d1 o d1 != 0 at degree {n}, column {p}")
        e2_ranks, e2_tors = _column_homology(dims, mats, n)
        top_surj = e2_ranks[depth] == 0 and not e2_tors[depth] if depth > 0 else True
        degrees.append(DegreeData(n, tuple(dims), tuple(e2_ranks), tuple(e2_tors), top_surj))
        for p in range(depth + 1):
            total = p + n
            if total > maxdeg:
                continue
            if (e2_ranks[p] or e2_tors[p]) and p >= 1 and total % 2 == 1:
                message = f"column {p} contributes to odd total degree {total}"
                if strict:
                    raise NonCollapsing(message)
                failures.append(message)
            ranks[total] += e2_ranks[p]
            torsion[total].extend(e2_tors[p])
    return PageReport(
        cover.name, maxdeg, tuple(degrees), BettiTable(ranks, torsion), tuple(failures)
    )


# -- closed forms ----------------------------------------------------------------


def _free_bu2() -> FreeRing:
    return FreeRing(GradedRing([("e1", 2), ("e2", 4)]))


def ka_module() -> MonomialIdeal:
    ring = GradedRing([("a1", 2), ("k1", 2), ("a2", 4), ("k2", 4)])
    return MonomialIdeal(ring, [(0, 1, 0, 0), (0, 0, 0, 1)])


def kc_module() -> MonomialIdeal:
    ring = GradedRing([("x1", 2), ("x2", 2), ("x3", 2), ("x4", 2)])
    return MonomialIdeal(ring, [(1, 1, 0, 0)])


def closed_form_betti(charge: int, q: int, maxdeg: int) -> BettiTable:
    """Target tables, computed by direct monomial enumeration.

    Charge one: the base line class times a q-fold wedge of line classes.
    Charge two: a free rank-two piece, q copies of the one-point kernel
    module and one copy of the gluing-locus kernel module per pair of
    points.
    """
    if q < 0 or maxdeg < 0:
        raise ValueError("q and maxdeg must be nonnegative")
    ranks = [0] * (maxdeg + 1)
    if charge == 1:
        for deg in range(0, maxdeg + 1, 2):
            n = deg // 2
            count = 1  # u^n on the base factor
            for _ in range(q):  # wedge summand l: monomials u^i v^j, j >= 1
                count += sum(1 for j in range(1, n + 1))
            ranks[deg] = count
        return BettiTable(ranks)
    if charge == 2:
        spec = DirectSum(
            [(_free_bu2(), 1), (ka_module(), q), (kc_module(), q * (q - 1) // 2)]
        )
        for deg in range(0, maxdeg + 1, 2):
            ranks[deg] = hilbert(spec, deg)
        return BettiTable(ranks)
    raise ValueError("charge must be 1 or 2")


# -- the simplex-filtration assembly ----------------------------------------------


def _pair_kernel_rank(a, b) -> int:
    """Rank of the kernel of x -> A x composed with the quotient by im B."""
    a = as_object_array(a)
    b = as_object_array(b)
    stacked = np.hstack([a, b])
    return a.shape[1] - integer_rank(stacked) + integer_rank(b)


def _pair_cokernel(a, b):
    """(rank, torsion) of coker(Z^cols(A) -> Z^rows / im B)."""
    a = as_object_array(a)
    b = as_object_array(b)
    stacked = np.hstack([a, b])
    inv = snf_invariants(stacked)
    return a.shape[0] - len(inv), [d for d in inv if d != 1]


@dataclass(frozen=True)
class SimplexReport:
    q: int
    maxdeg: int
    betti: BettiTable
    middle_exact: bool
    vertex_connecting_surjective: bool
    top_surjective: bool


def simplex_assembly_betti(q: int, maxdeg: int, full=False):
    """Assemble the charge-two table for q points from the filtration of
    the (q-1)-simplex with subdivided edges.

    The three split complexes are realised as explicit integer matrices:
    (I) one kernel-module summand per midpoint with zero differential;
    (II) per vertex, the functions on its boundary midpoints mapping to
    the relative classes of its star; (III) functions on all midpoints
    mapping through the relative cochains of the subdivided 1-skeleton.
    Coefficients enter as tensor factors, so each simplicial matrix is
    computed once and scaled by the relevant Hilbert function.
    """
    if q < 2:
        raise ValueError("the assembly needs at least two points")
    pairs = comb(q, 2)
    # (II): per-vertex connecting map H^0(boundary) -> H^1(star, boundary)
    a2 = np.zeros((q - 1, q - 1), dtype=object)
    for i in range(q - 1):
        a2[i, i] = 1
    b2 = np.zeros((q - 1, 1), dtype=object)
    for i in range(q - 1):
        b2[i, 0] = 1  # image of the vertex cochain
    vertex_kernel = _pair_kernel_rank(a2, b2)
    vertex_coker_rank, vertex_coker_tors = _pair_cokernel(a2, b2)
    # (III): subdivided 1-skeleton; half-edge (i, {i,j}) oriented vertex -> midpoint
    mids = list(combinations(range(q), 2))
    half_edges = [(i, e) for e in mids for i in e]
    a3 = np.zeros((len(half_edges), len(mids)), dtype=object)
    for col, e in enumerate(mids):
        for row, (i, ee) in enumerate(half_edges):
            if ee == e:
                a3[row, col] = 1
    b3 = np.zeros((len(half_edges), q), dtype=object)
    for col in range(q):
        for row, (i, e) in enumerate(half_edges):
            if i == col:
                b3[row, col] = -1
    skeleton_kernel = _pair_kernel_rank(a3, b3)
    # middle homology of (III) is im(full boundary) / (im A3 + im B3):
    # exactness, torsion included, is a lattice equality
    full_boundary = np.hstack([b3, a3])
    connecting_image = np.hstack([a3, b3])
    middle_exact = lattice_contains(
        connecting_image, full_boundary
    ) and lattice_contains(full_boundary, connecting_image)
    middle_homology_rank = integer_rank(full_boundary) - integer_rank(connecting_image)
    # the relative classes surject onto H^1 of the skeleton: cokernel of
    # (cochains mod im B3) -> (cochains mod full boundary)
    ident = np.zeros((len(half_edges), len(half_edges)), dtype=object)
    for i in range(len(half_edges)):
        ident[i, i] = 1
    top_coker_rank, top_coker_tors = _pair_cokernel(ident, full_boundary)
    top_surjective = top_coker_rank == 0 and not top_coker_tors

    free = _free_bu2()
    ka = ka_module()
    kc = kc_module()
    ranks = [0] * (maxdeg + 1)
    torsion = [[] for _ in range(maxdeg + 1)]
    for deg in range(0, maxdeg + 1, 2):
        h_free = hilbert(free, deg)
        h_ka = hilbert(ka, deg)
        h_kc = hilbert(kc, deg)
        # (I): midpoints tensor the pair kernel module, no differential
        ranks[deg] += pairs * h_kc
        # (II): kernels contribute in even total degree...
        ranks[deg] += q * vertex_kernel * h_ka
        # (III): kernel = global sections of the skeleton
        ranks[deg] += skeleton_kernel * h_free
        # ...while cokernels and middle homology would land in odd degree
        if deg + 1 <= maxdeg:
            ranks[deg + 1] += q * vertex_coker_rank * h_ka
            torsion[deg + 1].extend(vertex_coker_tors * h_ka)
            ranks[deg + 1] += 0 if middle_exact else middle_homology_rank * h_free
    report = SimplexReport(
        q,
        maxdeg,
        BettiTable(ranks, torsion),
        middle_exact,
        vertex_coker_rank == 0 and not vertex_coker_tors,
        top_surjective,
    )
    return report if full else report.betti


# -- the charge-two splitting check ------------------------------------------------


@dataclass(frozen=True)
class DecompositionRow:
    degree: int
    total_rank: int
    kc_rank: int
    edge_kernel_rank: int

    @property
    def ok(self):
        return self.total_rank == self.kc_rank + self.edge_kernel_rank


def decomposition_check_q2(maxdeg: int, pages: PageReport | None = None):
    """Degree-wise check that the charge-two cohomology splits as the
    gluing-locus kernel plus the kernel of restriction to the overlap."""
    cover = build_cover_charge2_q2()
    if pages is None:
        pages = compute_pages(cover, maxdeg)
    arrows = {(a.source, a.target): a.rmap for a in cover.arrows}
    kc_maps = [arrows[("N2", "NL")], arrows[("N2", "NR")]]
    al_a0 = arrows[("AL", "A0")]
    ar_a0 = arrows[("AR", "A0")]
    rows = []
    for deg in range(maxdeg + 1):
        if deg % 2:
            rows.append(DecompositionRow(deg, pages.betti.rank(deg), 0, 0))
            continue
        kc_rank = kernel_hilbert(kc_maps, deg)
        left = map_matrix(al_a0, deg)
        right = map_matrix(ar_a0, deg)
        stacked = np.hstack([left, right])
        cols = stacked.shape[1]
        edge_kernel = cols - integer_rank(stacked) if stacked.size else cols
        rows.append(DecompositionRow(deg, pages.betti.rank(deg), kc_rank, edge_kernel))
    return rows


# -- serialisation -----------------------------------------------------------------


def cover_to_json(cover: CoverDescription) -> dict:
    return {
        "name": cover.name,
        "faces": [
            {"name": f.name, "vertices": list(f.vertices), "ring": ring_to_json(f.ring)}
            for f in cover.faces
        ],
        "arrows": [
            {"source": a.source, "target": a.target, "map": map_to_json(a.rmap)}
            for a in cover.arrows
        ],
    }


def cover_from_json(data: dict) -> CoverDescription:
    faces = [
        Face(f["name"], tuple(f["vertices"]), ring_from_json(f["ring"]))
        for f in data["faces"]
    ]
    arrows = [
        Arrow(a["source"], a["target"], map_from_json(a["map"])) for a in data["arrows"]
    ]
    return CoverDescription(data["name"], faces, arrows)


def betti_to_tsv(table: BettiTable) -> str:
    return table.tsv()


def betti_to_json(table: BettiTable) -> str:
    return json.dumps(table.to_json(), indent=2)

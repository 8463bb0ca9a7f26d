"""Even-graded polynomial rings over Z and maps between them.

Rings on named Chern-class generators, monomial ideals, direct sums, and
ring maps given on generators.  The per-degree objects (monomial bases,
integer matrices of maps, Hilbert functions) feed the spectral sequence
engine.  Monomials are exponent tuples; the basis order is descending
lexicographic, which pins every matrix down to a reproducible fixture.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DegreeMismatch
from .matrices import as_object_array, integer_rank

# integer polynomials: {exponent tuple: coefficient}
IntPoly = dict


def poly_add(p: IntPoly, q: IntPoly) -> IntPoly:
    out = dict(p)
    for e, c in q.items():
        c2 = out.get(e, 0) + c
        if c2:
            out[e] = c2
        else:
            out.pop(e, None)
    return out


def poly_mul(p: IntPoly, q: IntPoly) -> IntPoly:
    out: IntPoly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            c = out.get(e, 0) + c1 * c2
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def poly_scale(p: IntPoly, c: int) -> IntPoly:
    if c == 0:
        return {}
    return {e: c * v for e, v in p.items()}


@dataclass(frozen=True)
class GradedRing:
    """Free polynomial ring on named generators of even positive degree."""

    generators: tuple

    def __init__(self, generators):
        gens = tuple((str(n), int(d)) for n, d in generators)
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for n, d in gens:
            if d <= 0 or d % 2:
                raise ValueError(f"generator {n} must have even positive degree, got {d}")
        object.__setattr__(self, "generators", gens)

    @property
    def names(self):
        return tuple(n for n, _ in self.generators)

    @property
    def degrees(self):
        return tuple(d for _, d in self.generators)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def unit_exponent(self, name: str) -> tuple:
        e = [0] * len(self.generators)
        e[self.index(name)] = 1
        return tuple(e)

    def monomial_degree(self, exps) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def monomial_name(self, exps) -> str:
        parts = [
            n if e == 1 else f"{n}^{e}"
            for (n, _), e in zip(self.generators, exps)
            if e
        ]
        return "*".join(parts) if parts else "1"


def _exponent_vectors(degrees, n):
    if not degrees:
        if n == 0:
            yield ()
        return
    d = degrees[0]
    for e in range(n // d, -1, -1):
        for rest in _exponent_vectors(degrees[1:], n - e * d):
            yield (e,) + rest


@lru_cache(maxsize=None)
def _monomial_basis_cached(degrees: tuple, n: int) -> tuple:
    return tuple(sorted(_exponent_vectors(degrees, n), reverse=True))


def monomial_basis(ring: GradedRing, n: int) -> list[tuple]:
    """All exponent vectors of weighted degree n, descending lex order."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return list(_monomial_basis_cached(ring.degrees, n))


@dataclass(frozen=True)
class FreeRing:
    ring: GradedRing


@dataclass(frozen=True)
class MonomialIdeal:
    ring: GradedRing
    gens: tuple  # exponent tuples

    def __init__(self, ring, gens):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gens", tuple(tuple(int(x) for x in g) for g in gens))
        for g in self.gens:
            if len(g) != len(ring.generators):
                raise ValueError("ideal generator has wrong arity")


@dataclass(frozen=True)
class DirectSum:
    parts: tuple  # pairs (spec, multiplicity)

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple((s, int(m)) for s, m in parts))


GradedModuleSpec = object  # FreeRing | MonomialIdeal | DirectSum


def _lcm_exponents(gens):
    return tuple(max(col) for col in zip(*gens))


def hilbert(spec, n: int) -> int:
    """Rank of the degree-n piece of the module."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if isinstance(spec, FreeRing):
        return len(monomial_basis(spec.ring, n))
    if isinstance(spec, MonomialIdeal):
        # inclusion-exclusion over lcms of generator subsets
        total = 0
        for size in range(1, len(spec.gens) + 1):
            sign = 1 if size % 2 else -1
            for subset in combinations(spec.gens, size):
                l = _lcm_exponents(subset)
                d = n - spec.ring.monomial_degree(l)
                if d >= 0:
                    total += sign * len(monomial_basis(spec.ring, d))
        return total
    if isinstance(spec, DirectSum):
        return sum(m * hilbert(s, n) for s, m in spec.parts)
    raise TypeError(f"not a graded module spec: {spec!r}")


@dataclass(frozen=True)
class RingMap:
    """Degree-preserving map of free rings, given on generators.

    ``images`` maps source generator names to integer polynomials in the
    target ring; ``sign`` is applied additively when the map is used as a
    component of a differential.
    """

    source: GradedRing
    target: GradedRing
    images: dict
    sign: int = 1
    _pow_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        fixed = {}
        for name, deg in self.source.generators:
            if name not in self.images:
                raise ValueError(f"no image for generator {name}")
            poly = {tuple(e): int(c) for e, c in self.images[name].items() if c}
            for e in poly:
                if self.target.monomial_degree(e) != deg:
                    raise DegreeMismatch(
                        f"image of {name} is not homogeneous of degree {deg}"
                    )
            fixed[name] = poly
        object.__setattr__(self, "images", fixed)

    def _gen_power(self, name: str, e: int) -> IntPoly:
        key = (name, e)
        cached = self._pow_cache.get(key)
        if cached is not None:
            return cached
        if e == 0:
            p = {tuple([0] * len(self.target.generators)): 1}
        else:
            p = poly_mul(self._gen_power(name, e - 1), self.images[name])
        self._pow_cache[key] = p
        return p

    def apply_monomial(self, exps) -> IntPoly:
        out = {tuple([0] * len(self.target.generators)): 1}
        for (name, _), e in zip(self.source.generators, exps):
            if e:
                out = poly_mul(out, self._gen_power(name, e))
        return out

    def apply_poly(self, poly: IntPoly) -> IntPoly:
        out: IntPoly = {}
        for e, c in poly.items():
            out = poly_add(out, poly_scale(self.apply_monomial(e), c))
        return out


def compose(outer: RingMap, inner: RingMap) -> RingMap:
    """outer o inner, with multiplied signs."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise ValueError("maps are not composable")
    images = {
        name: outer.apply_poly(inner.images[name]) for name, _ in inner.source.generators
    }
    return RingMap(inner.source, outer.target, images, inner.sign * outer.sign)


def map_matrix(f: RingMap, n: int) -> np.ndarray:
    """Integer matrix of f in degree n (rows: target basis, cols: source)."""
    src = monomial_basis(f.source, n)
    tgt = monomial_basis(f.target, n)
    tgt_index = {e: i for i, e in enumerate(tgt)}
    mat = np.zeros((len(tgt), len(src)), dtype=object)
    for j, exps in enumerate(src):
        for e, c in f.apply_monomial(exps).items():
            mat[tgt_index[e], j] = f.sign * c
    return mat


def kernel_hilbert(maps: list[RingMap], n: int) -> int:
    """Kernel rank at degree n of the stacked matrices of several maps.

    All maps must share a source; signs do not change the kernel.
    """
    if not maps:
        raise ValueError("need at least one map")
    src = maps[0].source
    if any(f.source != src for f in maps):
        raise ValueError("maps must share their source ring")
    cols = len(monomial_basis(src, n))
    if cols == 0:
        return 0
    stacked = np.vstack([map_matrix(f, n) for f in maps])
    return cols - integer_rank(stacked)


# -- JSON interchange ---------------------------------------------------------


def ring_to_json(ring: GradedRing) -> dict:
    return {"generators": [[n, d] for n, d in ring.generators]}


def ring_from_json(data: dict) -> GradedRing:
    return GradedRing([(n, d) for n, d in data["generators"]])


def spec_to_json(spec) -> dict:
    if isinstance(spec, FreeRing):
        return {"kind": "free", "ring": ring_to_json(spec.ring)}
    if isinstance(spec, MonomialIdeal):
        return {
            "kind": "monomial-ideal",
            "ring": ring_to_json(spec.ring),
            "gens": [list(g) for g in spec.gens],
        }
    if isinstance(spec, DirectSum):
        return {
            "kind": "direct-sum",
            "parts": [[spec_to_json(s), m] for s, m in spec.parts],
        }
    raise TypeError(f"not a graded module spec: {spec!r}")


def spec_from_json(data: dict):
    kind = data["kind"]
    if kind == "free":
        return FreeRing(ring_from_json(data["ring"]))
    if kind == "monomial-ideal":
        return MonomialIdeal(ring_from_json(data["ring"]), data["gens"])
    if kind == "direct-sum":
        return DirectSum([(spec_from_json(s), m) for s, m in data["parts"]])
    raise ValueError(f"unknown module spec kind {kind!r}")


def map_to_json(f: RingMap) -> dict:
    return {
        "source": ring_to_json(f.source),
        "target": ring_to_json(f.target),
        "sign": f.sign,
        "images": {
            name: [[c, list(e)] for e, c in sorted(poly.items(), reverse=True)]
            for name, poly in f.images.items()
        },
    }


def map_from_json(data: dict) -> RingMap:
    images = {
        name: {tuple(e): c for c, e in terms} for name, terms in data["images"].items()
    }
    return RingMap(
        ring_from_json(data["source"]),
        ring_from_json(data["target"]),
        images,
        data.get("sign", 1),
    )


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)

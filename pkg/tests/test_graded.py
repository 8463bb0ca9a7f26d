import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blowup_moduli.errors import DegreeMismatch
from blowup_moduli.graded import (
    DirectSum,
    FreeRing,
    GradedRing,
    MonomialIdeal,
    RingMap,
    compose,
    hilbert,
    kernel_hilbert,
    map_from_json,
    map_matrix,
    map_to_json,
    monomial_basis,
    ring_from_json,
    ring_to_json,
    spec_from_json,
    spec_to_json,
)

BU2 = GradedRing([("a1", 2), ("a2", 4)])
KA_RING = GradedRing([("a1", 2), ("k1", 2), ("a2", 4), ("k2", 4)])
KC_RING = GradedRing([("x1", 2), ("x2", 2), ("x3", 2), ("x4", 2)])


def count_multiples(ideal: MonomialIdeal, n: int) -> int:
    """Enumeration oracle: monomials of degree n divisible by some generator."""
    count = 0
    for mono in monomial_basis(ideal.ring, n):
        if any(all(m >= g for m, g in zip(mono, gen)) for gen in ideal.gens):
            count += 1
    return count


class TestMonomialBasis:
    def test_degree8_in_bu2(self):
        basis = monomial_basis(BU2, 8)
        assert basis == [(4, 0), (2, 1), (0, 2)]  # a1^4, a1^2 a2, a2^2

    def test_odd_degree_empty(self):
        assert monomial_basis(KC_RING, 5) == []

    def test_degree4_four_linear_gens(self):
        assert len(monomial_basis(KC_RING, 4)) == 10

    def test_descending_lex(self):
        basis = monomial_basis(KC_RING, 4)
        assert basis == sorted(basis, reverse=True)
        assert basis[0] == (2, 0, 0, 0)


class TestHilbert:
    def test_ka_degree2(self):
        ka = MonomialIdeal(KA_RING, [KA_RING.unit_exponent("k1"), KA_RING.unit_exponent("k2")])
        assert hilbert(ka, 2) == 1  # k1

    def test_ka_degree4(self):
        ka = MonomialIdeal(KA_RING, [KA_RING.unit_exponent("k1"), KA_RING.unit_exponent("k2")])
        assert hilbert(ka, 4) == 3  # k1^2, a1 k1, k2

    def test_kc_degree4(self):
        kc = MonomialIdeal(KC_RING, [(1, 1, 0, 0)])
        assert hilbert(kc, 4) == 1  # x1 x2

    def test_direct_sum(self):
        kc = MonomialIdeal(KC_RING, [(1, 1, 0, 0)])
        spec = DirectSum([(FreeRing(BU2), 1), (kc, 3)])
        assert hilbert(spec, 4) == hilbert(FreeRing(BU2), 4) + 3

    @pytest.mark.parametrize("n", range(0, 26, 2))
    def test_matches_enumeration_oracle(self, n):
        ka = MonomialIdeal(KA_RING, [KA_RING.unit_exponent("k1"), KA_RING.unit_exponent("k2")])
        kc = MonomialIdeal(KC_RING, [(1, 1, 0, 0)])
        assert hilbert(ka, n) == count_multiples(ka, n)
        assert hilbert(kc, n) == count_multiples(kc, n)

    @pytest.mark.parametrize("n", range(0, 21))
    def test_ideal_plus_quotient_is_free(self, n):
        ideal = MonomialIdeal(KA_RING, [(1, 1, 0, 0), (0, 0, 1, 1), (2, 0, 0, 0)])
        free = len(monomial_basis(KA_RING, n))
        in_ideal = hilbert(ideal, n)
        quotient = free - count_multiples(ideal, n)
        assert in_ideal + quotient == free


def whitney_map():
    n0 = GradedRing([("n0L", 2), ("n0R", 2)])
    return RingMap(
        BU2,
        n0,
        {
            "a1": {(1, 0): 1, (0, 1): 1},
            "a2": {(1, 1): 1},
        },
    )


class TestMapMatrix:
    def test_whitney_sum_degree4(self):
        mat = map_matrix(whitney_map(), 4)
        # bases: {a1^2, a2} -> {n0L^2, n0L n0R, n0R^2}
        assert mat.tolist() == [[1, 0], [2, 1], [1, 0]]

    def test_sign_negates(self):
        f = whitney_map()
        g = RingMap(f.source, f.target, {"a1": f.images["a1"], "a2": f.images["a2"]}, sign=-1)
        assert (map_matrix(g, 4) + map_matrix(f, 4)).tolist() == [[0, 0]] * 3

    def test_identity_map(self):
        ident = RingMap(BU2, BU2, {"a1": {(1, 0): 1}, "a2": {(0, 1): 1}})
        for n in (0, 2, 4, 8, 12):
            mat = map_matrix(ident, n)
            assert mat.tolist() == [
                [1 if i == j else 0 for j in range(mat.shape[1])]
                for i in range(mat.shape[0])
            ]

    def test_non_homogeneous_rejected(self):
        with pytest.raises(DegreeMismatch):
            RingMap(BU2, KC_RING, {"a1": {(1, 0, 0, 0): 1}, "a2": {(1, 0, 0, 0): 1}})

    @given(
        st.lists(st.integers(-3, 3), min_size=2, max_size=2),
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    )
    @settings(max_examples=25, deadline=None)
    def test_composition(self, lin, quad):
        ring_b = GradedRing([("u", 2), ("v", 2)])
        ring_c = GradedRing([("w", 2)])
        f = RingMap(
            BU2,
            ring_b,
            {
                "a1": {(1, 0): lin[0], (0, 1): lin[1]},
                "a2": {(2, 0): quad[0], (1, 1): quad[1], (0, 2): quad[2]},
            },
        )
        g = RingMap(ring_b, ring_c, {"u": {(1,): 2}, "v": {(1,): -1}})
        gf = compose(g, f)
        for n in (0, 2, 4, 6, 8):
            lhs = map_matrix(gf, n)
            rhs = map_matrix(g, n) @ map_matrix(f, n)
            assert lhs.tolist() == rhs.tolist()


class TestKernelHilbert:
    def test_kernel_of_identity(self):
        ident = RingMap(BU2, BU2, {"a1": {(1, 0): 1}, "a2": {(0, 1): 1}})
        assert kernel_hilbert([ident], 8) == 0

    def test_quotient_map_kernel_is_ideal(self):
        # killing k1, k2 leaves the ideal (k1, k2) as the kernel
        f = RingMap(
            KA_RING,
            BU2,
            {
                "a1": {(1, 0): 1},
                "k1": {},
                "a2": {(0, 1): 1},
                "k2": {},
            },
        )
        ka = MonomialIdeal(KA_RING, [KA_RING.unit_exponent("k1"), KA_RING.unit_exponent("k2")])
        for n in range(0, 18, 2):
            assert kernel_hilbert([f], n) == hilbert(ka, n)


class TestJson:
    def test_ring_roundtrip(self):
        assert ring_from_json(ring_to_json(KA_RING)) == KA_RING

    def test_spec_roundtrip(self):
        kc = MonomialIdeal(KC_RING, [(1, 1, 0, 0)])
        spec = DirectSum([(FreeRing(BU2), 1), (kc, 3)])
        again = spec_from_json(spec_to_json(spec))
        for n in range(0, 12, 2):
            assert hilbert(again, n) == hilbert(spec, n)

    def test_map_roundtrip(self):
        f = whitney_map()
        g = map_from_json(map_to_json(f))
        assert map_matrix(g, 8).tolist() == map_matrix(f, 8).tolist()

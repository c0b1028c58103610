import pytest

from ears.system import Root, Window, enumerate_roots
from ears.weyl import (
    check_reflectable,
    decompose,
    decompose_all,
    minimal_reflectable_size,
    orbit_closure,
    reflect,
)


def affine_base(e):
    return [e.root_from_coords((1, 0)), e.root_from_coords((-1, 1))]


class TestReflect:
    def test_negates_itself(self, affine_a1):
        a = affine_a1.root_from_coords((1, 0))
        assert reflect(affine_a1, a, a) == affine_a1.neg(a)

    def test_affine_example(self, affine_a1):
        e = affine_a1
        a = e.root_from_coords((1, 0))
        b = e.root_from_coords((-1, 1))
        assert reflect(e, a, b) == e.root_from_coords((1, 1))

    def test_isotropic_fixed(self, affine_a1):
        e = affine_a1
        a = e.root_from_coords((1, 0))
        sigma = Root(None, (1,))
        assert reflect(e, a, sigma) == sigma

    def test_isotropic_direction_rejected(self, affine_a1):
        with pytest.raises(ValueError):
            reflect(affine_a1, Root(None, (1,)), affine_a1.root_from_coords((1, 0)))

    @pytest.mark.parametrize("fixture", ["affine_a1", "b2_affine", "a2_nu1"])
    def test_involution_and_class_preservation(self, fixture, request):
        e = request.getfixturevalue(fixture)
        roots = enumerate_roots(e, Window(1))
        noniso = [r for r in roots if r.finite is not None]
        for a in noniso:
            for b in roots:
                image = reflect(e, a, b)
                assert e.root_class(image) == e.root_class(b)
                assert reflect(e, a, image) == b


class TestOrbitClosure:
    def test_affine_base_covers(self, affine_a1):
        e = affine_a1
        orbit = orbit_closure(e, affine_base(e), Window(3))
        target = {r for r in enumerate_roots(e, Window(3)) if r.finite is not None}
        assert target <= orbit

    def test_singleton_orbit(self, affine_a1):
        e = affine_a1
        a = e.root_from_coords((1, 0))
        assert orbit_closure(e, [a], Window(3)) == {a, e.neg(a)}

    def test_coset_blind_base_misses(self, a1_nu2_full):
        # all three base roots have isotropic classes 00, 10, 01; reflections
        # in rank one move the isotropic part by even steps only
        e = a1_nu2_full
        base = [
            e.root_from_coords((1, 0, 0)),
            e.root_from_coords((1, 1, 0)),
            e.root_from_coords((1, 0, 1)),
        ]
        report = check_reflectable(e, base, Window(2))
        assert not report.covered
        missing = {e.root_coords(r) for r in report.missing}
        assert (1, 1, 1) in missing

    def test_margin_stability(self, affine_a1, a2_nu1, b2_affine):
        cases = [
            (affine_a1, affine_base(affine_a1)),
            (
                a2_nu1,
                [
                    a2_nu1.root_from_coords((1, 0, 0)),
                    a2_nu1.root_from_coords((0, 1, 0)),
                    a2_nu1.root_from_coords((-1, -1, 1)),
                ],
            ),
            (
                b2_affine,
                [
                    b2_affine.root_from_coords((1, 0, 0)),
                    b2_affine.root_from_coords((0, 1, 0)),
                    b2_affine.root_from_coords((-1, -2, 1)),
                ],
            ),
        ]
        for e, base in cases:
            stable = orbit_closure(e, base, Window(2), margin=2)
            larger = orbit_closure(e, base, Window(2), margin=4)
            assert stable == larger
            # monotone in the margin
            smaller = orbit_closure(e, base, Window(2), margin=0)
            assert smaller <= stable

    def test_empty_base_rejected(self, affine_a1):
        with pytest.raises(ValueError):
            orbit_closure(affine_a1, [], Window(2))

    def test_isotropic_base_rejected(self, affine_a1):
        with pytest.raises(ValueError):
            orbit_closure(affine_a1, [Root(None, (1,))], Window(2))


class TestMinimalSize:
    def test_affine_a1_is_two(self, affine_a1):
        res = minimal_reflectable_size(affine_a1, Window(3), 4)
        assert res.size == 2

    def test_three_coset_is_three(self, a1_nu2_three_coset):
        res = minimal_reflectable_size(a1_nu2_three_coset, Window(3), 4)
        assert res.size == 3

    def test_full_lattice_is_four(self, a1_nu2_full):
        res = minimal_reflectable_size(a1_nu2_full, Window(3), 4)
        assert res.size == 4

    def test_simply_laced_affine_is_rank_plus_one(self, a2_nu1):
        res = minimal_reflectable_size(a2_nu1, Window(2), 4)
        assert res.size == 3

    def test_not_found_below_minimum(self, a1_nu2_full):
        res = minimal_reflectable_size(a1_nu2_full, Window(2), 3)
        assert res.size is None
        assert not res.found

    def test_found_base_verifies(self, affine_a1):
        res = minimal_reflectable_size(affine_a1, Window(3), 2)
        assert check_reflectable(affine_a1, res.base, Window(3)).covered


class TestDecompose:
    def test_single_term_positive(self, affine_a1):
        e = affine_a1
        b = e.root_from_coords((1, 0))
        dec = decompose(e, b, affine_base(e), Window(3))
        assert dec.terms == ((1, b),)

    def test_single_term_negative(self, affine_a1):
        e = affine_a1
        b = e.root_from_coords((1, 0))
        dec = decompose(e, e.neg(b), affine_base(e), Window(3))
        assert dec.terms == ((-1, b),)

    def test_affine_three_step(self, affine_a1):
        e = affine_a1
        target = e.root_from_coords((1, 1))
        dec = decompose(e, target, affine_base(e), Window(3))
        assert len(dec.terms) == 3
        assert dec.verify(e, target)
        for prefix in dec.prefixes(e):
            assert e.root_class(prefix).is_root

    def test_unreachable_raises(self, a1_nu2_full):
        e = a1_nu2_full
        base = [e.root_from_coords((1, 0, 0))]
        with pytest.raises(ValueError):
            decompose(e, e.root_from_coords((1, 1, 0)), base, Window(2))

    def test_all_window_roots_reachable(self, a2_nu1):
        e = a2_nu1
        base = [
            e.root_from_coords((1, 0, 0)),
            e.root_from_coords((0, 1, 0)),
            e.root_from_coords((-1, -1, 1)),
        ]
        assert check_reflectable(e, base, Window(2)).covered
        table = decompose_all(e, base, Window(2))
        for r in enumerate_roots(e, Window(2)):
            if r.finite is None:
                continue
            assert r in table
            assert table[r].verify(e, r)

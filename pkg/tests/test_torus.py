from dataclasses import dataclass

import pytest

from ears.characters import standard_hom_character, verify_character
from ears.system import Root, Window, enumerate_roots
from ears.torus import (
    CycScalar,
    TorusElement,
    bracket,
    build_torus,
    chevalley,
    compose,
    diagonal_from_hom,
    extract_core_character,
    jacobi_identity_report,
    trace_form,
    verify_automorphism,
)


@pytest.fixture(scope="module")
def torus():
    return build_torus(2, 1, 2)


class TestCycScalar:
    def test_zeta_power_wraps(self):
        z = CycScalar.zeta(4)
        acc = CycScalar.one(4)
        for _ in range(4):
            acc = acc * z
        assert acc == CycScalar.one(4)

    def test_convolution(self):
        a = CycScalar(3, (1, 1, 0))
        b = CycScalar(3, (0, 1, 0))
        assert a * b == CycScalar(3, (0, 1, 1))

    def test_unity_exponent(self):
        assert CycScalar.zeta(4, 3).unity_exponent() == 3
        assert CycScalar(4, (1, 1, 0, 0)).unity_exponent() is None

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            CycScalar.one(2) * CycScalar.one(3)


class TestBracket:
    def test_opposite_units_give_cartan(self, torus):
        t = torus
        result = bracket(t.e(0, 1, (1,)), t.e(1, 0, (-1,)))
        assert result == t.h(0)

    def test_nested_units(self, torus):
        t = torus
        assert bracket(t.e(0, 1), t.e(1, 2)) == t.e(0, 2)

    def test_cartan_eigenvalue_two(self, torus):
        t = torus
        x = t.e(0, 1, (3,))
        assert bracket(t.h(0), x) == x.scale(2)

    def test_antisymmetry_and_bilinearity(self, torus):
        t = torus
        x = t.e(0, 1, (1,)) + t.h(1, (-1,)).scale(3)
        y = t.e(2, 0) - t.e(1, 2, (2,))
        assert bracket(x, y) == -bracket(y, x)
        z = t.e(0, 2, (1,))
        lhs = bracket(x + z, y)
        assert lhs == bracket(x, y) + bracket(z, y)

    def test_vanishes_outside_roots(self, torus):
        t = torus
        # degrees add to twice a root, which is not a root
        assert bracket(t.e(0, 1), t.e(0, 1, (2,))).is_zero

    def test_distant_cartan_commutes(self, torus):
        assert bracket(torus.h(0), torus.h(1)).is_zero

    def test_parameter_mismatch(self, torus):
        other = build_torus(2, 2, 2)
        with pytest.raises(ValueError):
            bracket(torus.e(0, 1), other.e(0, 1))

    def test_jacobi_window_one(self, torus):
        report = jacobi_identity_report(torus, Window(1))
        assert report["ok"]
        assert report["triples"] == 24 ** 3


class TestChevalley:
    def test_matrix_unit_image(self, torus):
        t = torus
        tau = chevalley(t)
        assert tau.apply(t.e(0, 1, (1,))) == -t.e(1, 0, (-1,))

    def test_cartan_negated(self, torus):
        t = torus
        tau = chevalley(t)
        assert tau.apply(t.h(0)) == -t.h(0)

    def test_involution_on_window(self, torus):
        tau = chevalley(torus)
        for x in torus.graded_basis(Window(3)):
            assert tau.apply(tau.apply(x)) == x

    def test_verifies(self, torus):
        report = verify_automorphism(torus, chevalley(torus), Window(2))
        assert report.ok, report.checks


class TestDiagonal:
    def test_identity_from_zero_hom(self, torus):
        psi = diagonal_from_hom(torus, (0, 0, 0))
        for x in torus.graded_basis(Window(2)):
            assert psi.apply(x) == x

    def test_first_simple_flip(self, torus):
        # exponent 1 on the first simple root, order 2: e01 picks up the sign
        # (the order-2 group element, distinct from -1 in the group ring), e12 fixed
        t = torus
        psi = diagonal_from_hom(t, (1, 0, 0))
        sign = CycScalar.zeta(2, 1)
        for lam in ((0,), (1,), (-2,)):
            assert psi.apply(t.e(0, 1, lam)) == t.e(0, 1, lam).scale(sign)
            assert psi.apply(t.e(1, 2, lam)) == t.e(1, 2, lam)
            assert psi.apply(t.e(0, 2, lam)) == t.e(0, 2, lam).scale(sign)

    def test_isotropic_scaling(self, torus):
        t = torus
        psi = diagonal_from_hom(t, (0, 0, 1))
        x = t.h(0, (1,))
        assert psi.apply(x) == x.scale(CycScalar.zeta(2, 1))
        assert psi.apply(t.h(0)) == t.h(0)

    def test_degree_exponent_matches_root_coords(self, torus):
        t = torus
        psi = diagonal_from_hom(t, (1, 0, 1))
        e_sys = t.ears
        hom = standard_hom_character(e_sys, (1, 0, 1), 2)
        for lam in ((0,), (1,), (-1,)):
            for i in range(3):
                for j in range(3):
                    if i == j:
                        continue
                    root = Root(t.finite_root(i, j), lam)
                    want = hom.eval(root).exponent
                    assert psi._degree_exponent(("e", i, j), lam) == want

    def test_verifies(self, torus):
        psi = diagonal_from_hom(torus, (1, 1, 1))
        report = verify_automorphism(torus, psi, Window(2))
        assert report.ok, report.checks

    def test_wrong_length_rejected(self, torus):
        with pytest.raises(ValueError):
            diagonal_from_hom(torus, (1, 0))


class TestComposite:
    def test_chevalley_then_diagonal_negates_cartan(self, torus):
        t = torus
        comp = compose(chevalley(t), diagonal_from_hom(t, (1, 0, 1)))
        for r in range(t.ell):
            assert comp.apply(t.h(r)) == -t.h(r)

    def test_square_is_identity(self, torus):
        t = torus
        comp = compose(chevalley(t), diagonal_from_hom(t, (1, 0, 1)))
        for x in t.graded_basis(Window(2)):
            assert comp.apply(comp.apply(x)) == x

    def test_maps_root_space_to_opposite(self, torus):
        t = torus
        comp = compose(chevalley(t), diagonal_from_hom(t, (1, 1, 0)))
        for lam in ((0,), (1,), (-2,)):
            for i in range(3):
                for j in range(3):
                    if i == j:
                        continue
                    image = comp.apply(t.e(i, j, lam))
                    assert len(image.terms) == 1
                    key, deg, _ = image.terms[0]
                    assert key == ("e", j, i)
                    assert deg == tuple(-x for x in lam)


class TestFormPreservation:
    def test_trace_form_values(self, torus):
        t = torus
        assert trace_form(t.e(0, 1, (1,)), t.e(1, 0, (-1,))) == CycScalar.one(2)
        assert trace_form(t.e(0, 1, (1,)), t.e(1, 0, (0,))).is_zero
        assert trace_form(t.h(0), t.h(0)) == CycScalar.one(2).scale(2)
        assert trace_form(t.h(0), t.h(1)) == CycScalar.one(2).scale(-1)

    def test_invariance(self, torus):
        # (x, [y, z]) = ([x, y], z) on a sample
        t = torus
        x, y, z = t.e(0, 1, (1,)), t.e(1, 2, (-1,)), t.e(2, 0)
        assert trace_form(x, bracket(y, z)) == trace_form(bracket(x, y), z)


@dataclass(frozen=True)
class _CorruptedDiagonal:
    """Scales e01 only at Laurent degree zero: incoherent across the root space."""

    ell: int
    nu: int
    modulus: int
    kind: str = "diagonal"

    def apply(self, x: TorusElement) -> TorusElement:
        terms = []
        for key, lam, c in x.terms:
            if key == ("e", 0, 1) and not any(lam):
                c = c * CycScalar.zeta(self.modulus, 1)
            terms.append((key, lam, c))
        return TorusElement(x.ell, x.nu, x.modulus, tuple(terms))


class TestNegativeControls:
    def test_corrupted_diagonal_fails_with_witness(self, torus):
        bad = _CorruptedDiagonal(torus.ell, torus.nu, torus.modulus)
        report = verify_automorphism(torus, bad, Window(1))
        assert not report.ok
        assert report.checks["bracket_compatibility"]["failures"]

    def test_corrupted_diagonal_fails_extraction(self, torus):
        bad = _CorruptedDiagonal(torus.ell, torus.nu, torus.modulus)
        with pytest.raises(ValueError):
            extract_core_character(torus, bad, Window(1))

    def test_chevalley_composite_not_cartan(self, torus):
        with pytest.raises(ValueError):
            extract_core_character(torus, chevalley(torus), Window(1))


class TestExtraction:
    def test_roundtrip(self, torus):
        t = torus
        hom = (1, 0, 1)
        char, report = extract_core_character(t, diagonal_from_hom(t, hom), Window(2))
        assert all(v is True for k, v in report.items() if isinstance(v, bool))
        reference = standard_hom_character(t.ears, hom, t.modulus)
        for r in enumerate_roots(t.ears, Window(2)):
            assert char.eval(r).exponent == reference.eval(r).exponent

    def test_identity_gives_trivial_character(self, torus):
        char, _ = extract_core_character(
            torus, diagonal_from_hom(torus, (0, 0, 0)), Window(1)
        )
        assert all(exp == 0 for _, exp in char.rule.entries)

    def test_extracted_character_verifies(self, torus):
        char, _ = extract_core_character(
            torus, diagonal_from_hom(torus, (1, 1, 0)), Window(2)
        )
        assert verify_character(char, Window(2)).ok

    def test_composite_of_diagonals(self, torus):
        t = torus
        comp = compose(diagonal_from_hom(t, (1, 0, 1)), diagonal_from_hom(t, (0, 1, 1)))
        char, _ = extract_core_character(t, comp, Window(1))
        reference = standard_hom_character(t.ears, (1, 1, 0), t.modulus)
        for r in enumerate_roots(t.ears, Window(1)):
            assert char.eval(r).exponent == reference.eval(r).exponent


class TestValidation:
    def test_rank_floor(self):
        with pytest.raises(ValueError):
            build_torus(1, 1, 2)

    def test_bad_indices(self, torus):
        with pytest.raises(ValueError):
            torus.e(0, 0)
        with pytest.raises(ValueError):
            torus.h(5)

    def test_wrong_degree_length(self, torus):
        with pytest.raises(ValueError):
            torus.e(0, 1, (1, 2))

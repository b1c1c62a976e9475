import random

import pytest

from pndeform.errors import DeterminantNotOne, IndexOutOfRange, InvalidRepresentation
from pndeform.mat import (
    LocalElement,
    Mat2,
    diagonalizations,
    h_poly,
    is_conjugate_to_reflection,
    is_scaled_transvection,
    is_transvection,
    mat_pow_via_trace,
    ordinary_form,
    projective_lines,
    triangularizations,
)
from pndeform.ring import GaloisRing

Z9 = GaloisRing(3, 2)
Z25 = GaloisRing(5, 2)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


class TestHPoly:
    def test_initial_values(self):
        assert h_poly(1).coeffs == (1,)
        assert h_poly(2).coeffs == (0, 1)

    def test_h4(self):
        assert h_poly(4).coeffs == (0, -2, 0, 1)  # T^3 - 2T

    def test_degree_and_leading_coefficient(self):
        for n in range(1, 51):
            coeffs = h_poly(n).coeffs
            assert len(coeffs) == n
            assert coeffs[-1] == 1

    def test_value_at_two(self):
        for n in range(1, 51):
            assert h_poly(n).eval_int(2) == n

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            h_poly(0)

    def test_exact_identity(self):
        # h_n^2 - T h_n h_{n-1} + h_{n-1}^2 = 1 over the integers
        for n in range(2, 51):
            hn = list(h_poly(n).coeffs)
            hn1 = list(h_poly(n - 1).coeffs)
            prod = poly_mul(hn, hn)
            cross = poly_mul([0, 1], poly_mul(hn, hn1))
            sq1 = poly_mul(hn1, hn1)
            size = max(len(prod), len(cross), len(sq1))
            def at(v, i):
                return v[i] if i < len(v) else 0
            expr = [at(prod, i) - at(cross, i) + at(sq1, i) for i in range(size)]
            assert expr[0] == 1 and not any(expr[1:])


class TestTracePower:
    def test_identity_powers(self):
        I = Mat2.identity(Z9)
        for n in (1, 2, 7):
            assert mat_pow_via_trace(I, n) == I

    def test_unipotent(self):
        M = Mat2(Z9, 1, 1, 0, 1)
        assert mat_pow_via_trace(M, 5) == Mat2(Z9, 1, 5, 0, 1)

    def test_against_repeated_multiplication(self):
        rng = random.Random(7)
        for ring in (Z9, Z25):
            for _ in range(50):
                M = Mat2.identity(ring)
                for _ in range(5):
                    x = ring.elem(rng.randrange(ring.pn))
                    M = M * (Mat2(ring, 1, x, 0, 1) if rng.random() < 0.5
                             else Mat2(ring, 1, 0, x, 1))
                acc = Mat2.identity(ring)
                for n in range(1, 21):
                    acc = acc * M
                    assert mat_pow_via_trace(M, n) == acc

    def test_specific_seventh_power(self):
        M = Mat2(Z25, 2, 1, 1, 1)
        prod = Mat2.identity(Z25)
        for _ in range(7):
            prod = prod * M
        assert mat_pow_via_trace(M, 7) == prod

    def test_requires_det_one(self):
        with pytest.raises(DeterminantNotOne):
            mat_pow_via_trace(Mat2(Z9, 2, 0, 0, 1), 3)


class TestMat2:
    def test_inverse(self):
        M = Mat2(Z25, 2, 1, 1, 1)
        assert M * M.inverse() == Mat2.identity(Z25)

    def test_pow(self):
        M = Mat2(Z25, 2, 1, 1, 1)
        assert M ** 6 == M * M * M * M * M * M
        assert M ** -2 == (M * M).inverse()

    def test_reduce(self):
        M = Mat2(Z25, 7, 13, 0, 21)
        Mbar = M.reduce(1)
        assert Mbar.entries()[0].coeffs == (2,)
        assert Mbar.ring.n == 1

    def test_serialization_roundtrip(self):
        M = Mat2(Z25, 7, 13, 5, 21)
        assert Mat2.deserialize(M.serialize()) == M

    def test_projective_line_count(self):
        # p^n + p^(n-1) points over Z/p^n
        assert sum(1 for _ in projective_lines(Z9)) == 9 + 3
        assert sum(1 for _ in projective_lines(Z25)) == 25 + 5


class TestConjugacyPredicates:
    def test_scaled_transvection(self):
        assert is_transvection(Mat2(Z9, 1, 1, 0, 1))
        a = is_scaled_transvection(Mat2(Z25, 2, 2, 0, 2))
        assert a == Z25.elem(2)
        assert is_scaled_transvection(Mat2.identity(Z9)) is None
        assert is_scaled_transvection(Mat2(Z9, 2, 0, 0, 1)) is None

    def test_transvection_conjugate(self):
        C = Mat2(Z25, 1, 2, 3, 7)
        assert C.is_invertible()
        M = Mat2(Z25, 1, 1, 0, 1).conjugate_by(C)
        assert is_transvection(M)

    def test_transvection_by_exhaustive_conjugation(self):
        # oracle: orbit of [[1,1],[0,1]] under all of GL2(Z/9)
        from pndeform.grp import closure

        target = Mat2(Z9, 1, 1, 0, 1)
        gl = closure([Mat2(Z9, 1, 1, 0, 1), Mat2(Z9, 1, 0, 1, 1),
                      Mat2(Z9, 2, 0, 0, 1)])
        orbit = {target.conjugate_by(c).key() for c in gl.elements}
        predicate = {m.key() for m in gl.elements if is_transvection(m)}
        assert predicate == orbit

    def test_reflection_by_exhaustive_conjugation(self):
        # oracle: orbit of diag(-1, 1) under all of GL2(Z/9)
        from pndeform.grp import closure

        target = Mat2(Z9, -1, 0, 0, 1)
        gl = closure([Mat2(Z9, 1, 1, 0, 1), Mat2(Z9, 1, 0, 1, 1),
                      Mat2(Z9, 2, 0, 0, 1)])
        orbit = {target.conjugate_by(c).key() for c in gl.elements}
        predicate = {m.key() for m in gl.elements if is_conjugate_to_reflection(m)}
        assert predicate == orbit
        assert Mat2(Z9, 0, 1, 1, 0).key() in predicate

    def test_reflection_examples(self):
        assert is_conjugate_to_reflection(Mat2(Z9, -1, 0, 0, 1))
        assert is_conjugate_to_reflection(Mat2(Z9, 0, 1, 1, 0))
        assert not is_conjugate_to_reflection(Mat2.identity(Z9))


class TestOrdinaryForm:
    def elements_upper(self):
        return [
            LocalElement("i_p", Mat2(Z25, 2, 1, 0, 1), Z25.elem(2), True),
            LocalElement("frob_p", Mat2(Z25, 2, 0, 0, 1), Z25.elem(1), False),
        ]

    def test_already_triangular_gives_identity_conjugator(self):
        form = ordinary_form(Z25, self.elements_upper(), 2)
        assert form is not None
        assert form.conjugator == Mat2.identity(Z25)
        assert form.psi1["frob_p"] == Z25.elem(2)
        assert form.psi2["frob_p"] == Z25.one

    def test_conjugated_instance_recovers_characters(self):
        C = Mat2(Z25, 1, 2, 3, 7)
        assert C.is_invertible()
        els = [LocalElement(e.label, e.mat.conjugate_by(C), e.chi, e.is_inertia)
               for e in self.elements_upper()]
        form = ordinary_form(Z25, els, 2)
        assert form is not None
        # conjugated family is upper triangular with the same characters
        cinv = form.conjugator.inverse()
        for e in els:
            conj = cinv * e.mat * form.conjugator
            assert conj.c.is_zero()
        assert form.psi1["frob_p"] == Z25.elem(2)
        assert form.psi2["frob_p"] == Z25.one

    def test_irreducible_gives_failure(self):
        els = [LocalElement("i_p", Mat2(Z25, 0, 23, 1, 1), Z25.elem(2), True)]
        assert ordinary_form(Z25, els, 2) is None
        # sanity: residual is irreducible, no stable line even mod p
        assert not list(triangularizations(
            GaloisRing(5, 1), [Mat2(GaloisRing(5, 1), 0, 3, 1, 1)]))

    def test_non_invertible_rejected(self):
        els = [LocalElement("x", Mat2(Z25, 5, 0, 0, 1), Z25.one, True)]
        with pytest.raises(InvalidRepresentation):
            ordinary_form(Z25, els, 2)

    def test_triangularization_zero_lower_left(self):
        els = self.elements_upper()
        for tri in triangularizations(Z25, [e.mat for e in els]):
            cinv = tri.conjugator.inverse()
            for e in els:
                assert (cinv * e.mat * tri.conjugator).c.is_zero()

    def test_diagonalizations(self):
        mats = [Mat2(Z25, 24, 0, 0, 1), Mat2(Z25, 6, 0, 0, 2)]
        found = list(diagonalizations(Z25, mats))
        assert found
        dia = found[0]
        for M in mats:
            conj = dia.conjugator.inverse() * M * dia.conjugator
            assert conj.b.is_zero() and conj.c.is_zero()

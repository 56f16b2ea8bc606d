import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deformed_boson.deformation import DeformationSpec, build_ladder_table
from deformed_boson.eigenstate import (
    EigenElement,
    apply_ladder,
    conjugate,
    from_matrix,
    generator,
    inner_product,
    parse_word,
    pi_matrix,
    sigma_hom,
    star,
)
from deformed_boson.errors import IncompatibleError

D8 = build_ladder_table(DeformationSpec.standard(level_cap=8))
QP = build_ladder_table(DeformationSpec.qp(2.0, 1.0, level_cap=8))


def sparse_elements(table, max_terms=12):
    D = table.dim
    key = st.tuples(st.integers(0, D - 1), st.integers(0, D - 1))
    amp = st.builds(complex, st.integers(-4, 4), st.integers(-4, 4))
    return st.dictionaries(key, amp, max_size=max_terms).map(lambda d: EigenElement(d, table))


class TestStar:
    def test_chain(self):
        assert star(EigenElement.basis(0, 1, D8), EigenElement.basis(1, 2, D8)) == EigenElement.basis(0, 2, D8)

    def test_mismatch(self):
        assert star(EigenElement.basis(0, 1, D8), EigenElement.basis(0, 2, D8)).coeffs == {}

    def test_identity(self, rng):
        I = EigenElement.identity(D8)
        for _ in range(10):
            x = EigenElement({(int(rng.integers(8)), int(rng.integers(8))): complex(*rng.normal(size=2)) for _ in range(6)}, D8)
            assert star(I, x) == x and star(x, I) == x

    def test_vacuum_projection(self):
        v = EigenElement.basis(0, 0, QP)
        assert star(v, v) == v

    def test_incompatible(self):
        other = build_ladder_table(DeformationSpec.standard(level_cap=6))
        with pytest.raises(IncompatibleError):
            star(EigenElement.basis(0, 0, D8), EigenElement.basis(0, 0, other))

    @settings(max_examples=60, deadline=None)
    @given(sparse_elements(D8), sparse_elements(D8), sparse_elements(D8))
    def test_associative(self, x, y, z):
        assert star(star(x, y), z) == star(x, star(y, z))

    @settings(max_examples=60, deadline=None)
    @given(sparse_elements(D8), sparse_elements(D8))
    def test_pi_homomorphism(self, x, y):
        assert np.array_equal(pi_matrix(star(x, y)), pi_matrix(x) @ pi_matrix(y))

    @settings(max_examples=30, deadline=None)
    @given(sparse_elements(D8), sparse_elements(D8), st.integers(-3, 3))
    def test_bilinear(self, x, y, c):
        assert star(x * c + y, y) == star(x, y) * c + star(y, y)


class TestConjugateInner:
    def test_conjugate_examples(self):
        assert conjugate(EigenElement.basis(0, 1, D8)) == EigenElement.basis(1, 0, D8)
        assert conjugate(EigenElement.basis(3, 3, D8)) == EigenElement.basis(3, 3, D8)
        assert conjugate(EigenElement.basis(0, 2, D8, 2 + 1j)) == EigenElement.basis(2, 0, D8, 2 - 1j)

    @settings(max_examples=50, deadline=None)
    @given(sparse_elements(D8))
    def test_involution(self, x):
        assert conjugate(conjugate(x)) == x

    @settings(max_examples=50, deadline=None)
    @given(sparse_elements(D8), sparse_elements(D8))
    def test_conjugate_reverses_products(self, x, y):
        assert conjugate(star(x, y)) == star(conjugate(y), conjugate(x))

    def test_inner_examples(self):
        a, b = EigenElement.basis(1, 2, D8), EigenElement.basis(2, 1, D8)
        assert inner_product(a, a) == 1
        assert inner_product(a, b) == 0

    @settings(max_examples=50, deadline=None)
    @given(sparse_elements(D8))
    def test_positive(self, x):
        v = inner_product(x, x)
        assert v.real >= 0 and v.imag == 0

    def test_sesquilinear(self):
        x = EigenElement.basis(1, 2, D8, 1j)
        assert inner_product(x, x) == 1
        assert inner_product(x, EigenElement.basis(1, 2, D8)) == -1j


class TestGenerators:
    def test_standard_creation(self):
        assert generator("A_plus", D8).coeffs[(1, 0)] == 1.0

    def test_number_vacuum(self):
        assert (0, 0) not in generator("N", QP).coeffs

    def test_qp_hamiltonian(self):
        assert generator("H", QP).coeffs[(2, 2)] == 5.0

    def test_truncation_shapes(self):
        A = pi_matrix(generator("A", QP)).real
        assert np.count_nonzero(A) == 7 and np.allclose(np.diag(A, 1), np.sqrt(QP.F[1:8]))

    def test_commutator_diag(self):
        t = build_ladder_table(DeformationSpec.q_symmetric(1.3, level_cap=12))
        M = pi_matrix(sigma_hom("A A⁺ - A⁺ A", t)).real
        assert np.max(np.abs(M[:11, :11] - np.diag(t.f[:11]))) < 1e-12
        # the top entry is a truncation artefact
        assert M[11, 11] == pytest.approx(-t.F[11])

    def test_number_ladder_relations(self):
        N, A, Ad = (pi_matrix(generator(w, QP)).real for w in ("N", "A", "A_plus"))
        w = 7
        assert np.allclose((N @ Ad - Ad @ N)[:w, :w], Ad[:w, :w], rtol=0, atol=1e-13)
        assert np.allclose((A @ N - N @ A)[:w, :w], A[:w, :w], rtol=0, atol=1e-13)

    def test_hamiltonian_eigen(self):
        H = generator("H", QP)
        for n in range(7):
            for m in range(7):
                x = EigenElement.basis(n, m, QP)
                assert star(H, x) == x * QP.E[n]
                assert star(x, H) == x * QP.E[m]

    def test_unnormalised_matches(self):
        t = build_ladder_table(DeformationSpec.series([1, 0.5], level_cap=8))
        for w in ("A", "A_plus", "N", "H", "E"):
            a = pi_matrix(generator(w, t))
            b = pi_matrix(generator(w, t, unnormalised=True))
            assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


class TestApplyLadder:
    def test_examples(self):
        assert apply_ladder("left", "A", EigenElement.basis(0, 0, D8)).coeffs == {}
        r = apply_ladder("left", "A_plus", EigenElement.basis(1, 3, D8))
        assert r.coeffs == {(2, 3): math.sqrt(2)}
        assert apply_ladder("right", "N", EigenElement.basis(2, 5, D8)).coeffs == {(2, 5): 5}

    @pytest.mark.parametrize("which", ["A", "A_plus", "N", "H", "E"])
    @pytest.mark.parametrize("side", ["left", "right"])
    def test_agrees_with_star(self, side, which):
        g = generator(which, QP)
        for n in range(7):
            for m in range(7):
                x = EigenElement.basis(n, m, QP)
                ref = star(g, x) if side == "left" else star(x, g)
                assert apply_ladder(side, which, x) == ref

    def test_bad_side(self):
        with pytest.raises(ValueError):
            apply_ladder("up", "A", EigenElement.basis(0, 0, D8))


class TestSigmaHom:
    def test_unit(self):
        assert sigma_hom("1", D8) == EigenElement.identity(D8)

    def test_number(self):
        assert sigma_hom("A⁺A", D8).max_abs_diff(generator("N", D8)) < 1e-14
        exact = build_ladder_table(DeformationSpec.standard(level_cap=8), exact=True)
        assert sigma_hom("A⁺A", exact, unnormalised=True) == generator("N", exact, unnormalised=True)

    def test_homomorphism(self):
        u1, u2 = "A A⁺ + 2 N", "A⁺ A⁺ - A"
        lhs = star(sigma_hom(u1, QP), sigma_hom(u2, QP))
        prod = [(c1 * c2, l1 + l2) for c1, l1 in parse_word(u1) for c2, l2 in parse_word(u2)]
        rhs = sigma_hom(prod, QP)
        w = 8 - 1 - 3
        assert lhs.restrict(w).max_abs_diff(rhs.restrict(w)) < 1e-12

    def test_parse(self):
        assert parse_word("A A⁺ − A⁺ A") == [(1, ("A", "A_plus")), (-1, ("A_plus", "A"))]
        assert parse_word("2.5 N + 1") == [(2.5, ("N",)), (1, ())]
        with pytest.raises(ValueError):
            parse_word("A +")
        with pytest.raises(ValueError):
            parse_word("B")


class TestPiAndJson:
    def test_pi_examples(self):
        M = pi_matrix(EigenElement.basis(1, 2, D8))
        assert M[1, 2] == 1 and np.count_nonzero(M) == 1
        assert np.array_equal(pi_matrix(EigenElement.identity(D8)), np.eye(8))

    def test_from_matrix_inverse(self, rng):
        M = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        assert np.array_equal(pi_matrix(from_matrix(M, D8)), M)

    def test_json_round_trip(self):
        x = EigenElement({(0, 1): 1 + 2j, (3, 3): -0.5}, D8)
        assert EigenElement.from_dict(x.to_dict(), D8) == x
        assert x.to_dict()["dim"] == 8

    def test_index_bound(self):
        with pytest.raises(IndexError):
            EigenElement.basis(8, 0, D8)

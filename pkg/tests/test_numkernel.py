import numpy as np
import pytest
from hypothesis import given, strategies as st

from opspectra.errors import ConvergenceError, InputError
from opspectra.numkernel import (
    Polynomial, adjoint, allclose, char_poly, commutator, identity, matmul,
    normalized_trace, operator_norm, poly_roots, random_unitary, trace, unit_matrix,
)
from strategies import cgauss, complex_matrices, matrix_pairs, seeds


E12 = unit_matrix(2, 0, 1)
E21 = unit_matrix(2, 1, 0)


def as_multiset_gap(x, y):
    """Max distance after optimal sorting-free pairing (greedy is fine for separated sets)."""
    x, y = list(np.asarray(x)), list(np.asarray(y))
    worst = 0.0
    for z in x:
        j = int(np.argmin([abs(z - w) for w in y]))
        worst = max(worst, abs(z - y.pop(j)))
    return worst


class TestMatmul:
    def test_identity_and_zero(self, rng):
        a = cgauss(rng, 3)
        assert np.array_equal(matmul(identity(3), a), a)
        assert np.array_equal(matmul(np.zeros((3, 3)), a), np.zeros((3, 3)))

    def test_hand_product(self):
        assert np.array_equal(matmul([[0, 1], [0, 0]], [[0, 0], [1, 0]]), [[1, 0], [0, 0]])

    def test_rectangular_shapes(self, rng):
        assert matmul(cgauss(rng, 2, 3), cgauss(rng, 3, 5)).shape == (2, 5)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(InputError):
            matmul(cgauss(rng, 2, 3), cgauss(rng, 2, 3))

    def test_rejects_vectors(self):
        with pytest.raises(InputError):
            matmul(np.ones(3), np.ones((3, 3)))


class TestCommutatorAndTrace:
    def test_commutator_examples(self, rng):
        a = cgauss(rng, 4)
        assert np.array_equal(commutator(a, a), np.zeros((4, 4)))
        assert np.allclose(commutator(identity(4), a), 0)
        assert np.array_equal(commutator(E12, E21), np.diag([1, -1]))

    def test_commutator_shape_mismatch(self, rng):
        with pytest.raises(InputError):
            commutator(cgauss(rng, 2), cgauss(rng, 3))

    def test_trace_examples(self):
        assert trace(identity(5)) == 5
        assert normalized_trace(identity(5)) == 1
        assert trace(np.diag([1, 1, -2])) == 0

    def test_trace_non_square(self):
        with pytest.raises(InputError):
            trace(np.ones((2, 3)))
        with pytest.raises(InputError):
            normalized_trace(np.ones((2, 3)))

    @given(matrix_pairs(max_n=32))
    def test_trace_of_commutator_vanishes(self, pair):
        a, b = pair
        n = a.shape[0]
        assert abs(trace(commutator(a, b))) <= 1e-10 * n * operator_norm(a) * operator_norm(b)

    @given(matrix_pairs())
    def test_trace_cyclic(self, pair):
        a, b = pair
        assert abs(trace(a @ b) - trace(b @ a)) <= 1e-10 * (1 + np.abs(a).sum() * np.abs(b).sum())

    @given(complex_matrices())
    def test_adjoint_involution(self, a):
        assert np.array_equal(adjoint(adjoint(a)), a)

    def test_allclose_scales_with_norm(self):
        a = 1e6 * identity(2)
        assert allclose(a, a + 1e-5)
        assert not allclose(identity(2), identity(2) + 1e-5)


class TestOperatorNorm:
    def test_examples(self):
        assert operator_norm(identity(4)) == pytest.approx(1.0, abs=1e-12)
        assert operator_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0, abs=1e-12)
        c = 2.0 - 1.5j
        assert operator_norm(c * E12) == pytest.approx(abs(c), abs=1e-12)

    def test_zero(self):
        assert operator_norm(np.zeros((3, 3))) == 0.0

    @pytest.mark.parametrize("method", ["jacobi", "power"])
    def test_matches_svd(self, rng, method):
        for n in (1, 2, 5, 16):
            a = cgauss(rng, n)
            want = np.linalg.svd(a, compute_uv=False)[0]
            assert operator_norm(a, method) == pytest.approx(want, rel=1e-9)

    def test_rectangular(self, rng):
        a = cgauss(rng, 3, 7)
        assert operator_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)

    def test_unknown_method(self):
        with pytest.raises(InputError):
            operator_norm(identity(2), "qr")

    @given(matrix_pairs(max_n=16))
    def test_submultiplicative(self, pair):
        a, b = pair
        assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-10)


class TestCharPoly:
    def test_two_by_two_closed_form(self):
        a, b, c, d = 1 + 2j, -0.5, 3.0, 4 - 1j
        p = char_poly([[a, b], [c, d]])
        assert np.allclose(p.coefficients, [a * d - b * c, -(a + d), 1])

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_identity_binomial(self, n):
        want = np.poly1d([1, -1]) ** n
        assert np.allclose(char_poly(identity(n)).coefficients, want.coeffs[::-1])

    def test_rank_one_products(self):
        p1, p2 = char_poly(E12 @ E21), char_poly(E21 @ E12)
        assert p1.coefficients == p2.coefficients
        assert np.allclose(p1.coefficients, [0, -1, 1])

    def test_matches_numpy_poly(self, rng):
        a = cgauss(rng, 9)
        assert np.allclose(char_poly(a).coefficients, np.poly(a)[::-1], atol=1e-10)

    def test_monic(self, rng):
        assert char_poly(cgauss(rng, 7)).coefficients[-1] == 1

    def test_size_guard(self):
        with pytest.raises(InputError):
            char_poly(identity(65))

    @given(matrix_pairs(max_n=16))
    def test_ab_ba_coefficients(self, pair):
        a, b = pair
        n = a.shape[0]
        pa, pb = char_poly(a @ b).as_array(), char_poly(b @ a).as_array()
        scale = max(operator_norm(a @ b), operator_norm(b @ a), 1.0)
        from math import comb
        for k in range(n + 1):
            assert abs(pa[k] - pb[k]) <= 1e-9 * comb(n, k) * scale ** (n - k)


class TestPolyRoots:
    def test_simple(self):
        assert as_multiset_gap(poly_roots([-1, 0, 1]), [1, -1]) < 1e-12

    def test_double_root(self):
        assert np.max(np.abs(poly_roots([0, 0, 1]))) < 1e-7

    def test_quadratic_formula(self, rng):
        b, c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        disc = np.sqrt(b * b - 4 * c + 0j)
        want = [(-b + disc) / 2, (-b - disc) / 2]
        assert as_multiset_gap(poly_roots([c, b, 1]), want) < 1e-10

    def test_non_monic_is_normalized(self):
        assert as_multiset_gap(poly_roots(Polynomial((-6, 0, 2))), [np.sqrt(3), -np.sqrt(3)]) < 1e-12

    def test_errors(self):
        with pytest.raises(InputError):
            poly_roots([1])
        with pytest.raises(InputError):
            poly_roots([1, 0])

    def test_non_convergence_carries_residuals(self):
        with pytest.raises(ConvergenceError) as info:
            poly_roots([1, 0, 0, 0, 0, 0, 1], max_sweeps=1)
        assert info.value.residuals.shape == (6,)

    @given(seeds, st.integers(1, 12))
    def test_diagonal_recovered(self, seed, n):
        d = np.random.default_rng(seed).uniform(-3, 3, n) + 1j * np.random.default_rng(seed + 1).uniform(-3, 3, n)
        roots = poly_roots(char_poly(np.diag(d)))
        assert as_multiset_gap(roots, d) < 1e-10 * max(1.0, np.max(np.abs(d)))

    def test_diagonal_recovered_well_separated(self):
        d = np.arange(1, 9) - 4.5 + 0.25j
        assert as_multiset_gap(poly_roots(char_poly(np.diag(d))), d) < 1e-10

    def test_polynomial_horner(self):
        p = Polynomial((1, -2, 3))
        assert p(2.0) == 1 - 4 + 12
        assert p.degree == 2
        with pytest.raises(InputError):
            Polynomial(())


def test_random_unitary_is_unitary(rng):
    u = random_unitary(np.random.Generator(np.random.Philox(1)), 6)
    assert np.allclose(u.conj().T @ u, np.eye(6), atol=1e-12)

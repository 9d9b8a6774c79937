from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opspectra.ccr import (
    preclosed_failure_demo, spectrum_symmetry_check, trace_obstruction,
    truncated_canonical_pair, truncation_identity_check, wielandt_inverse, wielandt_residuals,
)
from opspectra.errors import InputError, NotHermitianError, SingularityError
from opspectra.numkernel import operator_norm, unit_matrix
from opspectra.waveline import momentum_matrix, position_matrix
from strategies import cgauss, matrix_pairs

E11, E12, E21 = unit_matrix(2, 0, 0), unit_matrix(2, 0, 1), unit_matrix(2, 1, 0)


def oscillator_oracle(n, hbar):
    """Q, P built entry by entry from <k|a|k+1> = sqrt(k+1)."""
    a = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        a[k, k + 1] = np.sqrt(k + 1)
    q = np.sqrt(hbar / 2) * (a + a.T)
    p = 1j * np.sqrt(hbar / 2) * (a.T - a)
    return q, p


class TestTraceObstruction:
    def test_self_commutator(self, rng):
        a = cgauss(rng, 4)
        rep = trace_obstruction(a, a, hbar=2.0)
        assert rep.commutator_trace == 0
        assert rep.defect_norm == pytest.approx(2.0)
        assert rep.defect_norm_minus == pytest.approx(2.0)

    def test_oscillator_n3(self):
        pair = truncated_canonical_pair(3, hbar=0.5)
        rep = trace_obstruction(pair.q, pair.p, hbar=0.5)
        assert rep.defect_norm == pytest.approx(1.5, abs=1e-12)
        assert rep.defect_location == (2, 2)
        assert not rep.certifies_heisenberg

    def test_random_8(self, rng):
        a, b = cgauss(rng, 8), cgauss(rng, 8)
        rep = trace_obstruction(a, b)
        assert abs(rep.commutator_trace) <= 1e-9 * 8 * operator_norm(a) * operator_norm(b)

    def test_shape_mismatch(self, rng):
        with pytest.raises(InputError):
            trace_obstruction(cgauss(rng, 2), cgauss(rng, 3))

    @given(matrix_pairs(max_n=16), st.floats(1e-3, 1e3))
    def test_never_certifies(self, pair, hbar):
        rep = trace_obstruction(*pair, hbar=hbar)
        assert rep.defect_norm >= hbar * (1 - 1e-12)
        assert rep.defect_norm_minus >= hbar * (1 - 1e-12)
        assert not rep.certifies_heisenberg


class TestSpectrumSymmetry:
    def test_identity_factor(self, rng):
        rep = spectrum_symmetry_check(np.eye(5), cgauss(rng, 5))
        assert rep.passed and rep.max_coeff_gap == 0.0

    def test_rank_one_pair(self):
        rep = spectrum_symmetry_check(E12, E21)
        assert rep.passed and rep.max_coeff_gap == 0.0
        assert np.allclose(rep.nonzero_roots_ab, [1]) and np.allclose(rep.nonzero_roots_ba, [1])

    def test_random_8_against_numpy(self, rng):
        a, b = cgauss(rng, 8), cgauss(rng, 8)
        rep = spectrum_symmetry_check(a, b)
        assert rep.passed
        ev_ab, ev_ba = np.sort_complex(np.linalg.eigvals(a @ b)), np.sort_complex(np.linalg.eigvals(b @ a))
        assert np.allclose(ev_ab, ev_ba, atol=1e-10)
        assert rep.max_root_gap < 1e-8

    def test_rectangular_factors_become_square(self, rng):
        # AB (3x3) and BA (5x5) differ only by zero eigenvalues; embed by padding
        a, b = cgauss(rng, 3, 5), cgauss(rng, 5, 3)
        pa = np.zeros((5, 5), complex)
        pb = np.zeros((5, 5), complex)
        pa[:3], pb[:, :3] = a, b
        rep = spectrum_symmetry_check(pa, pb)
        assert rep.passed and rep.nonzero_roots_ab.size == 3

    def test_size_guard(self):
        with pytest.raises(InputError):
            spectrum_symmetry_check(np.eye(17), np.eye(17))

    @given(matrix_pairs(max_n=16))
    def test_always_passes(self, pair):
        assert spectrum_symmetry_check(*pair).passed


class TestWielandt:
    def test_zero_factors(self, rng):
        a = cgauss(rng, 3)
        assert np.allclose(wielandt_inverse(np.zeros((3, 3)), a), np.eye(3))
        assert np.allclose(wielandt_inverse(a, np.zeros((3, 3))), np.eye(3))

    def test_closed_form_2x2(self):
        c = wielandt_inverse(0.5 * E12, 0.5 * E21)
        assert np.allclose(c, np.diag([1, 4 / 3]), atol=1e-15)
        assert np.allclose(np.eye(2) - 0.25 * E21 @ E12, np.diag([1, 0.75]))

    def test_against_numpy_inverse(self, rng):
        a, b = cgauss(rng, 6), cgauss(rng, 6)
        assert np.allclose(wielandt_inverse(a, b), np.linalg.inv(np.eye(6) - b @ a), atol=1e-10)

    def test_singular(self):
        with pytest.raises(SingularityError) as info:
            wielandt_inverse(E11, E11)
        assert info.value.singular_value < 1e-12

    @given(matrix_pairs(max_n=16))
    def test_two_sided_residuals(self, pair):
        try:
            r = wielandt_residuals(*pair)
        except SingularityError:
            return
        assert r["left"] <= 1e-9 * r["cond"]
        assert r["right"] <= 1e-9 * r["cond"]


class TestCanonicalPair:
    def test_n2(self):
        p = truncated_canonical_pair(2, hbar=1.0)
        assert np.allclose(p.q @ p.p - p.p @ p.q, 1j * np.diag([1, -1]))

    def test_n3(self):
        p = truncated_canonical_pair(3, hbar=2.0)
        c = p.q @ p.p - p.p @ p.q
        assert np.allclose(c, 2j * np.diag([1, 1, -2]))
        assert operator_norm(c - 2j * np.eye(3)) == pytest.approx(6.0)

    @pytest.mark.parametrize("n", [2, 5, 17, 64])
    def test_matches_oracle(self, n):
        q, p = oscillator_oracle(n, 0.7)
        pair = truncated_canonical_pair(n, 0.7)
        assert np.allclose(pair.q, q) and np.allclose(pair.p, p)
        assert pair.levels == n and pair.hbar == 0.7

    @given(st.integers(2, 64), st.floats(0.01, 10.0))
    def test_defect_support(self, n, hbar):
        pair = truncated_canonical_pair(n, hbar)
        assert np.max(np.abs(pair.q - pair.q.conj().T)) <= 1e-10
        assert np.max(np.abs(pair.p - pair.p.conj().T)) <= 1e-10
        c = pair.q @ pair.p - pair.p @ pair.q
        d = c - 1j * hbar * np.eye(n)
        assert abs(d[n - 1, n - 1] + 1j * hbar * n) <= 1e-12 * max(1.0, hbar * n)
        d[n - 1, n - 1] = 0
        assert np.max(np.abs(d)) <= 1e-12 * max(1.0, hbar * n)
        assert abs(np.trace(c)) <= 1e-9 * n

    def test_errors(self):
        with pytest.raises(InputError):
            truncated_canonical_pair(1)
        with pytest.raises(InputError):
            truncated_canonical_pair(4, hbar=0.0)


class TestTruncationIdentity:
    def test_full_cutoff(self, rng):
        h = cgauss(rng, 6)
        h = h + h.conj().T
        a = cgauss(rng, 6)
        row = truncation_identity_check(h, a, [100.0])[0]
        assert row.rank == 6 and row.passed
        assert row.trace_cut_commutator == pytest.approx(row.trace_full_commutator, abs=1e-12)

    def test_hand_example(self):
        row = truncation_identity_check(np.diag([1.0, 5.0]), E12, [2.0])[0]
        assert row.rank == 1 and row.residual == 0.0 and row.trace_cut_commutator == 0

    def test_grid_pair(self):
        p = momentum_matrix(-4.0, 4.0, 64, "spectral")
        q = position_matrix(-4.0, 4.0, 64)
        rows = truncation_identity_check(p, q, [5.0, 10.0, 20.0])
        assert [r.rank for r in rows] == sorted(r.rank for r in rows)
        for r in rows:
            assert r.residual <= 1e-8 * r.scale
            assert abs(r.trace_cut_commutator) <= 1e-9 * r.scale

    def test_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            truncation_identity_check(E12, E12, [1.0])

    @given(matrix_pairs(min_n=2, max_n=12), st.lists(st.floats(0.01, 3.0), min_size=1, max_size=4))
    def test_residual_bound(self, pair, cutoffs):
        g, a = pair
        p = g + g.conj().T
        scale = (operator_norm(p) + 1) * (operator_norm(a) + 1)
        for row in truncation_identity_check(p, a, cutoffs):
            assert row.residual <= 1e-8 * scale
            assert abs(row.trace_cut_commutator) <= 1e-9 * scale


class TestPreclosedDemo:
    def test_rows_are_exact(self):
        rows, z = preclosed_failure_demo(10, 10)
        assert z[0] == 1 and z[9] == Fraction(1, 10)
        assert rows[0].u_norm == 1
        assert rows[9].u_norm == Fraction(1, 10)
        assert all(r.image_gap == 0 for r in rows)

    def test_brute_force_oracle(self):
        dim = 6
        rows, z = preclosed_failure_demo(dim, dim)
        t = [[Fraction(k * k) if j == k else Fraction(0) for j in range(1, dim + 1)] for k in range(1, dim + 1)]
        for r in rows:
            u = [Fraction(0)] * dim
            u[r.m - 1] = Fraction(1, r.m)
            tu = [sum(t[i][j] * u[j] for j in range(dim)) for i in range(dim)]
            inner = sum(x * y for x, y in zip(tu, z))
            assert [inner * zk for zk in z] == z

    def test_errors(self):
        with pytest.raises(InputError):
            preclosed_failure_demo(5, 4)
        with pytest.raises(InputError):
            preclosed_failure_demo(0, 4)

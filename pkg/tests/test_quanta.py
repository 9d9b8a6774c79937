import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opspectra import quanta as q
from opspectra.errors import InputError

C = q.HISTORICAL


class TestConstants:
    def test_values(self):
        assert (C.h, C.m_e, C.epsilon, C.c, C.k_B) == (6.625e-27, 9.11e-28, 4.8025e-10, 2.99776e10, 1.380e-16)
        assert C.hbar == pytest.approx(6.625e-27 / (2 * math.pi))

    def test_validation(self):
        with pytest.raises(InputError):
            q.Constants(h=-1.0)
        with pytest.raises(InputError):
            q.Constants(k_B=float("inf"))
        assert q.Constants(k_B=1.38e-16).k_B == 1.38e-16

    def test_unit_audit(self):
        audit = q.unit_audit()
        assert audit and all(audit.values())

    def test_unit_audit_catches_wrong_formula(self):
        assert q.UNITS["h"] / (q.UNITS["m_e"] * q.CM) != q.CM  # h/(m x) is cm/s, not cm


class TestBlackBody:
    def test_rayleigh_jeans_limit(self):
        temp = 3000.0
        for x in (0.02, 0.01, 1e-3):
            lam = C.h * C.c / (C.k_B * temp * x)
            assert q.planck_density(lam, temp) / q.rayleigh_jeans_density(lam, temp) == pytest.approx(1.0, rel=0.01)

    def test_short_wavelength_underflows_to_zero(self):
        assert q.planck_density(1e-12, 300.0) == 0.0
        assert q.planck_density(1e3, 300.0) < 1e-20

    def test_single_interior_maximum(self):
        lam = np.geomspace(1e-6, 1e-1, 4000)
        p = q.planck_density(lam, 5000.0)
        peaks = np.sum((p[1:-1] > p[:-2]) & (p[1:-1] > p[2:]))
        assert peaks == 1
        # Wien displacement as an independent check: lambda_max T = hc / (4.965 k)
        assert lam[np.argmax(p)] * 5000.0 == pytest.approx(C.h * C.c / (4.965114 * C.k_B), rel=5e-3)

    @given(st.floats(1e-7, 1.0), st.floats(1.0, 1e5))
    def test_planck_below_rayleigh_jeans(self, lam, temp):
        assert q.planck_density(lam, temp) <= q.rayleigh_jeans_density(lam, temp) * (1 + 1e-12)

    def test_nonpositive_inputs(self):
        with pytest.raises(InputError):
            q.planck_density(-1.0, 300.0)
        with pytest.raises(InputError):
            q.rayleigh_jeans_density(1.0, 0.0)

    def test_uv_catastrophe(self):
        assert q.uv_catastrophe_integral(1e-4, 1e-4, 300.0) == 0.0
        a = q.uv_catastrophe_integral(1e-4, 1.0, 300.0)
        b = q.uv_catastrophe_integral(5e-5, 1.0, 300.0)
        assert b / a == pytest.approx(8.0, rel=1e-6)
        with pytest.raises(InputError):
            q.uv_catastrophe_integral(2.0, 1.0, 300.0)

    @pytest.mark.parametrize("lmin,r", [(1e-5, 1e-2), (1e-4, 1.0), (3e-3, 4e-3)])
    def test_quadrature_matches_closed_form(self, lmin, r):
        closed = q.uv_catastrophe_integral(lmin, r, 1000.0)
        assert q.uv_catastrophe_quadrature(lmin, r, 1000.0) == pytest.approx(closed, rel=1e-6)


class TestPhotoelectric:
    def test_cases(self):
        nu = 1e15
        assert q.photoelectric_max_ke(nu, 0.0).energy == C.h * nu
        at = q.photoelectric_max_ke(nu, C.h * nu)
        assert at.energy == 0.0 and at.emitted
        below = q.photoelectric_max_ke(nu, 2 * C.h * nu)
        assert below.energy < 0 and not below.emitted


class TestDeBroglie:
    def test_electron_third_c(self):
        lam = q.de_broglie_wavelength(C.m_e, C.c / 3) * q.ANGSTROM_PER_CM
        assert lam == pytest.approx(0.0727, abs=5e-4)

    def test_scaling_and_unit_case(self):
        assert q.de_broglie_wavelength(1.0, 2.0) == pytest.approx(q.de_broglie_wavelength(1.0, 1.0) / 2)
        assert q.de_broglie_wavelength(C.h, 1.0) == pytest.approx(1.0)

    def test_errors(self):
        with pytest.raises(InputError):
            q.de_broglie_wavelength(0.0, 1.0)


class TestBohr:
    def test_first_radius(self):
        assert q.bohr_orbit(1).radius == pytest.approx(0.529e-8, rel=2e-3)

    @given(st.integers(1, 50))
    def test_scaling(self, k):
        o1, ok = q.bohr_orbit(1), q.bohr_orbit(k)
        assert ok.radius / o1.radius == pytest.approx(k * k, rel=1e-14)
        assert ok.energy * k * k == pytest.approx(o1.energy, rel=1e-14)

    def test_radius_ratio(self):
        assert q.bohr_orbit(2).radius / q.bohr_orbit(1).radius == pytest.approx(4.0, rel=1e-15)

    def test_energy_is_half_coulomb(self):
        o = q.bohr_orbit(3)
        assert o.energy == pytest.approx(-C.epsilon ** 2 / (2 * o.radius), rel=1e-14)

    def test_errors(self):
        with pytest.raises(InputError):
            q.bohr_orbit(0)


class TestBalmer:
    def test_rydberg(self):
        assert q.rydberg() == pytest.approx(109739.53, abs=0.05)

    def test_rydberg_is_bohr_energy_over_hc(self):
        assert q.rydberg() == pytest.approx(-q.bohr_orbit(1).energy / (C.h * C.c), rel=1e-14)

    @pytest.mark.parametrize("l,want", list(zip(range(3, 8), q.COMPUTED_BALMER_ANGSTROM)))
    def test_golden_wavelengths(self, l, want):
        assert q.balmer_line(2, l).wavelength_angstrom == pytest.approx(want, abs=1.0)

    def test_paper_compat_rounding(self):
        rows = q.balmer_table(2, 7, paper_compat=True)
        assert tuple(r.wavelength_angstrom for r in rows) == q.COMPUTED_BALMER_ANGSTROM
        assert q.balmer_table(2, 7)[0].wavelength_angstrom != 6561

    def test_observed_list_kept_separately(self):
        assert q.OBSERVED_BALMER_ANGSTROM[0] == 6563 and q.OBSERVED_BALMER_ANGSTROM[-1] == 3921

    @given(st.integers(1, 5), st.integers(2, 30))
    def test_wave_numbers_increase(self, k, span):
        w = [q.balmer_line(k, l).wave_number for l in range(k + 1, k + 1 + span)]
        assert all(b > a for a, b in zip(w, w[1:]))

    def test_errors(self):
        with pytest.raises(InputError):
            q.balmer_line(3, 3)
        with pytest.raises(InputError):
            q.balmer_line(0, 2)

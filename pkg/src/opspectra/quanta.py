"""Early quantum formulas in CGS units: black-body densities, photoelectric
effect, matter waves, Bohr orbits and the Balmer series.

The default constants are the rounded historical values
(h = 6.625e-27 erg s, m = 9.11e-28 g, e = 4.8025e-10 esu, c = 2.99776e10 cm/s);
with them the Rydberg prefactor evaluates to 109,739.53 /cm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

ANGSTROM_PER_CM = 1e8
# spectroscopic Balmer wavelengths as printed (k = 2, l = 3..7); 3921 stands as printed
OBSERVED_BALMER_ANGSTROM = (6563, 4861, 4380, 4102, 3921)
COMPUTED_BALMER_ANGSTROM = (6561, 4860, 4339, 4101, 3969)
RYDBERG_PRINTED = 109739.53


@dataclass(frozen=True)
class Dim:
    """Exponents of (gram, centimetre, second, kelvin)."""

    g: Fraction = Fraction(0)
    cm: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    K: Fraction = Fraction(0)

    def _vec(self):
        return (self.g, self.cm, self.s, self.K)

    def __mul__(self, other: "Dim") -> "Dim":
        return Dim(*(a + b for a, b in zip(self._vec(), other._vec())))

    def __truediv__(self, other: "Dim") -> "Dim":
        return Dim(*(a - b for a, b in zip(self._vec(), other._vec())))

    def __pow__(self, p) -> "Dim":
        p = Fraction(p)
        return Dim(*(a * p for a in self._vec()))


F = Fraction
NONE = Dim()
GRAM = Dim(g=F(1))
CM = Dim(cm=F(1))
SEC = Dim(s=F(1))
KELVIN = Dim(K=F(1))
ERG = GRAM * CM ** 2 / SEC ** 2
ESU = GRAM ** F(1, 2) * CM ** F(3, 2) / SEC

UNITS = {
    "h": ERG * SEC,
    "m_e": GRAM,
    "epsilon": ESU,
    "c": CM / SEC,
    "k_B": ERG / KELVIN,
}


@dataclass(frozen=True)
class Constants:
    h: float = 6.625e-27        # erg sec
    m_e: float = 9.11e-28       # gram
    epsilon: float = 4.8025e-10  # esu
    c: float = 2.99776e10       # cm / sec
    k_B: float = 1.380e-16      # erg / K, conventional value; override as needed
    units: tuple = tuple(UNITS.items())

    def __post_init__(self):
        for name in UNITS:
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise InputError(f"constant {name} must be a positive finite number, got {v!r}")
        if dict(self.units) != UNITS:
            raise InputError("constant unit tags do not match the CGS table")

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)


HISTORICAL = Constants()


def _positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise InputError(f"{name} must be positive, got {v!r}")


def planck_density(lam, temp, const: Constants = HISTORICAL):
    """8 pi h c lam^-5 / (exp(hc / k lam T) - 1), in erg/cm^4.

    Evaluated in log space so that lam -> 0 underflows cleanly to 0.
    """
    lam = np.asarray(lam, dtype=float)
    _positive(lam=np.min(lam), T=temp)
    x = const.h * const.c / (const.k_B * lam * temp)
    # log(e^x - 1) = x + log(1 - e^-x), stable for large x; expm1 for small x
    log_den = np.where(x > 30.0, x + np.log1p(-np.exp(-np.minimum(x, 700.0))),
                       np.log(np.expm1(np.minimum(x, 30.0))))
    out = np.exp(math.log(8.0 * math.pi * const.h * const.c) - 5.0 * np.log(lam) - log_den)
    return float(out) if out.ndim == 0 else out


def rayleigh_jeans_density(lam, temp, const: Constants = HISTORICAL):
    lam = np.asarray(lam, dtype=float)
    _positive(lam=np.min(lam), T=temp)
    out = 8.0 * math.pi * const.k_B * temp * lam ** -4
    return float(out) if out.ndim == 0 else out


def uv_catastrophe_integral(lambda_min: float, r: float, temp: float,
                            const: Constants = HISTORICAL) -> float:
    """Rayleigh-Jeans energy between lambda_min and r: (8 pi k T / 3)(lambda_min^-3 - r^-3)."""
    _positive(lambda_min=lambda_min, r=r, T=temp)
    if lambda_min > r:
        raise InputError("lambda_min must not exceed r")
    return 8.0 * math.pi * const.k_B * temp / 3.0 * (lambda_min ** -3 - r ** -3)


def uv_catastrophe_quadrature(lambda_min: float, r: float, temp: float,
                              const: Constants = HISTORICAL, points: int = 20001) -> float:
    """Trapezoid rule for the same integral on a log-spaced wavelength grid."""
    _positive(lambda_min=lambda_min, r=r, T=temp)
    if lambda_min == r:
        return 0.0
    u = np.linspace(math.log(lambda_min), math.log(r), points)
    lam = np.exp(u)
    # d lam = lam du
    return float(np.trapezoid(rayleigh_jeans_density(lam, temp, const) * lam, u))


@dataclass(frozen=True)
class Photoemission:
    energy: float
    emitted: bool


def photoelectric_max_ke(nu: float, work: float, const: Constants = HISTORICAL) -> Photoemission:
    """Maximum kinetic energy h nu - a; below threshold nothing is emitted."""
    e = const.h * nu - work
    return Photoemission(e, e >= 0.0)


def de_broglie_wavelength(mass: float, speed: float, const: Constants = HISTORICAL) -> float:
    """h / (m v) in cm."""
    _positive(mass=mass, speed=speed)
    return const.h / (mass * speed)


@dataclass(frozen=True)
class BohrOrbit:
    k: int
    radius: float  # cm
    energy: float  # erg


def bohr_orbit(k: int, const: Constants = HISTORICAL) -> BohrOrbit:
    if k < 1:
        raise InputError("orbit index k must be >= 1")
    m, e, h = const.m_e, const.epsilon, const.h
    radius = k * k * h * h / (4.0 * math.pi ** 2 * m * e * e)
    energy = -2.0 * math.pi ** 2 * m * e ** 4 / (k * k * h * h)
    return BohrOrbit(k, radius, energy)


def rydberg(const: Constants = HISTORICAL) -> float:
    """2 pi^2 m e^4 / (h^3 c), in 1/cm."""
    return 2.0 * math.pi ** 2 * const.m_e * const.epsilon ** 4 / (const.h ** 3 * const.c)


@dataclass(frozen=True)
class BalmerLine:
    k: int
    l: int
    wave_number: float          # 1/cm
    wavelength_angstrom: float


def balmer_line(k: int, l: int, const: Constants = HISTORICAL) -> BalmerLine:
    if not 1 <= k < l:
        raise InputError(f"need 1 <= k < l, got k={k}, l={l}")
    w = rydberg(const) * (1.0 / k ** 2 - 1.0 / l ** 2)
    return BalmerLine(k, l, w, ANGSTROM_PER_CM / w)


def balmer_table(k: int = 2, l_max: int = 7, paper_compat: bool = False,
                 const: Constants = HISTORICAL) -> list[BalmerLine]:
    """Lines (k, l) for l = k+1..l_max; paper_compat rounds wavelengths to whole angstroms."""
    rows = [balmer_line(k, l, const) for l in range(k + 1, l_max + 1)]
    if paper_compat:
        rows = [BalmerLine(r.k, r.l, r.wave_number, float(round(r.wavelength_angstrom))) for r in rows]
    return rows


def unit_audit() -> dict[str, bool]:
    """Dimension check of every formula against its declared CGS output unit."""
    h, m, e, c, k = (UNITS[n] for n in ("h", "m_e", "epsilon", "c", "k_B"))
    lam, temp, nu = CM, KELVIN, SEC ** -1
    checks = {
        "planck_exponent": (h * c / (k * lam * temp), NONE),
        "planck_density": (h * c * lam ** -5, ERG / CM ** 4),
        "rayleigh_jeans_density": (k * temp * lam ** -4, ERG / CM ** 4),
        "uv_catastrophe_integral": (k * temp * lam ** -3, ERG / CM ** 3),
        "photoelectric": (h * nu, ERG),
        "de_broglie": (h / (m * CM / SEC), CM),
        "bohr_radius": (h ** 2 / (m * e ** 2), CM),
        "bohr_energy": (m * e ** 4 / h ** 2, ERG),
        "coulomb_energy": (e ** 2 / CM, ERG),
        "rydberg": (m * e ** 4 / (h ** 3 * c), CM ** -1),
    }
    return {name: got == want for name, (got, want) in checks.items()}

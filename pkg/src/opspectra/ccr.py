"""Why QP - PQ = i hbar I has no bounded solution, checked on matrices.

The trace of a commutator vanishes, the spectra of AB and BA agree away
from zero, truncated oscillator pairs push the whole defect into one corner
entry, and spectral cut-offs of an unbounded P turn [P, A] into genuine
matrix commutators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import InputError, SingularityError
from .numkernel import (
    CMat,
    _square,
    char_poly,
    commutator,
    max_abs,
    operator_norm,
    poly_roots,
)
from .spectral import _checked_hermitian, singular_system, spectral_resolution

CHAR_POLY_TOL = 1e-9
SPECTRUM_MAX_SIZE = 16
WIELANDT_SINGULAR_CUT = 1e-8
TRUNCATION_TOL = 1e-8
TRACE_TOL = 1e-9


@dataclass(frozen=True)
class CanonicalPair:
    q: CMat
    p: CMat
    levels: int
    hbar: float = 1.0


@dataclass(frozen=True)
class ObstructionReport:
    """How far [A, B] is from the Heisenberg right-hand side.

    ``defect_norm`` is measured against +i hbar I (QP - PQ = i hbar);
    ``defect_norm_minus`` against -i hbar I (the sign that comes out of
    P = i d/dt on L2(R)).  Both are operator norms.
    """

    commutator_trace: complex
    defect_norm: float
    defect_location: tuple
    defect_norm_minus: float
    defect_location_minus: tuple
    hbar: float

    @property
    def certifies_heisenberg(self) -> bool:
        return self.defect_norm < self.hbar and self.defect_norm_minus < self.hbar


def trace_obstruction(a, b, hbar: float = 1.0) -> ObstructionReport:
    c = commutator(a, b)
    n = c.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    plus = c - 1j * hbar * eye
    minus = c + 1j * hbar * eye
    loc_p = np.unravel_index(int(np.argmax(np.abs(plus))), plus.shape)
    loc_m = np.unravel_index(int(np.argmax(np.abs(minus))), minus.shape)
    return ObstructionReport(
        commutator_trace=complex(np.trace(c)),
        defect_norm=operator_norm(plus),
        defect_location=tuple(int(i) for i in loc_p),
        defect_norm_minus=operator_norm(minus),
        defect_location_minus=tuple(int(i) for i in loc_m),
        hbar=hbar,
    )


def _greedy_match(x: np.ndarray, y: np.ndarray) -> float:
    """Largest distance in a greedy nearest-neighbour pairing of two multisets."""
    y = list(y)
    worst = 0.0
    for v in sorted(x, key=lambda z: -abs(z)):
        if not y:
            return float("inf")
        d = [abs(v - w) for w in y]
        k = int(np.argmin(d))
        worst = max(worst, d[k])
        y.pop(k)
    return worst if not y else float("inf")


@dataclass
class SpectrumReport:
    passed: bool
    max_coeff_gap: float
    coeff_scale: float
    max_root_gap: float
    nonzero_roots_ab: np.ndarray = field(repr=False)
    nonzero_roots_ba: np.ndarray = field(repr=False)


def spectrum_symmetry_check(a, b, tol: float = CHAR_POLY_TOL) -> SpectrumReport:
    """Compare the characteristic polynomials of AB and BA coefficientwise.

    The gap of coefficient k is measured relative to C(n, k) rho^(n-k), the
    natural size of the elementary symmetric function it represents (rho is
    the larger of ||AB||, ||BA||).  Nonzero roots are matched greedily as a
    secondary diagnostic and do not decide ``passed``.
    """
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    n = a.shape[0]
    if n > SPECTRUM_MAX_SIZE:
        raise InputError(f"spectrum_symmetry_check limited to n <= {SPECTRUM_MAX_SIZE}")
    ab, ba = a @ b, b @ a
    pa, pb = char_poly(ab).as_array(), char_poly(ba).as_array()
    rho = max(operator_norm(ab), operator_norm(ba), 1e-300)
    scale = np.array([comb(n, k) * rho ** (n - k) for k in range(n + 1)])
    rel = np.abs(pa - pb) / scale
    gap = float(rel.max())

    ra, rb = poly_roots(pa), poly_roots(pb)
    cut = 1e-6 * max(rho, 1.0)
    nza, nzb = ra[np.abs(ra) > cut], rb[np.abs(rb) > cut]
    root_gap = _greedy_match(nza, nzb) if nza.size == nzb.size else float("inf")
    return SpectrumReport(gap <= tol, gap, float(scale.max()), root_gap, nza, nzb)


def wielandt_inverse(a, b) -> CMat:
    """C = B (I - AB)^{-1} A + I, the inverse of I - BA built from (I - AB)^{-1}."""
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    m = eye - a @ b
    sigma, _, _ = singular_system(m)
    if sigma[-1] <= WIELANDT_SINGULAR_CUT * sigma[0]:
        raise SingularityError(
            f"I - AB is numerically singular (smallest singular value {sigma[-1]:.3e})",
            singular_value=float(sigma[-1]),
        )
    return b @ np.linalg.solve(m, a) + eye


def wielandt_residuals(a, b, c=None) -> dict:
    """Two-sided residuals of C against I - BA, plus the condition number of I - AB."""
    a, b = _square(a), _square(b)
    c = wielandt_inverse(a, b) if c is None else c
    eye = np.eye(a.shape[0], dtype=np.complex128)
    m = eye - b @ a
    sigma, _, _ = singular_system(eye - a @ b)
    return {
        "left": operator_norm(m @ c - eye),
        "right": operator_norm(c @ m - eye),
        "cond": float(sigma[0] / sigma[-1]),
    }


def lowering_operator(n: int) -> CMat:
    """Truncated annihilation matrix with a[k-1, k] = sqrt(k)."""
    a = np.zeros((n, n), dtype=np.complex128)
    k = np.arange(1, n)
    a[k - 1, k] = np.sqrt(k)
    return a


def truncated_canonical_pair(n: int, hbar: float = 1.0) -> CanonicalPair:
    """Oscillator truncation; [Q, P] = i hbar (I - n E_{n-1,n-1})."""
    if n < 2:
        raise InputError("truncated_canonical_pair needs n >= 2")
    if hbar <= 0:
        raise InputError("hbar must be positive")
    a = lowering_operator(n)
    ad = a.conj().T
    s = np.sqrt(hbar / 2.0)
    return CanonicalPair(q=s * (a + ad), p=1j * s * (ad - a), levels=n, hbar=hbar)


@dataclass(frozen=True)
class CutoffRow:
    cutoff: float
    rank: int
    residual: float
    trace_cut_commutator: complex
    trace_full_commutator: complex
    scale: float
    passed: bool


def truncation_identity_check(p, a, cutoffs, tol: float = TRUNCATION_TOL,
                              trace_tol: float = TRACE_TOL) -> list[CutoffRow]:
    """Check E P E . E A E - E A E . E P E = E B E with B = [P, A].

    E is the spectral projection of P for [-n, n].  Tolerances scale with
    (||P|| + 1)(||A|| + 1).
    """
    p = _checked_hermitian(p)
    a = _square(a)
    if a.shape != p.shape:
        raise InputError(f"shape mismatch {p.shape} vs {a.shape}")
    b = p @ a - a @ p
    res = spectral_resolution(p)
    scale = (operator_norm(p) + 1.0) * (operator_norm(a) + 1.0)
    tr_b = complex(np.trace(b))
    rows = []
    for n in cutoffs:
        e = res.interval(-n, n)
        epe, eae, ebe = e @ p @ e, e @ a @ e, e @ b @ e
        resid = max_abs(epe @ eae - eae @ epe - ebe)
        tr = complex(np.trace(ebe))
        rank = int(round(float(np.trace(e).real)))
        ok = resid <= tol * scale and abs(tr) <= trace_tol * scale
        rows.append(CutoffRow(float(n), rank, resid, tr, tr_b, scale, ok))
    return rows


@dataclass(frozen=True)
class PreclosedRow:
    m: int
    u_norm: Fraction
    image_gap: Fraction


def preclosed_failure_demo(m_max: int, dim: int) -> tuple[list[PreclosedRow], list[Fraction]]:
    """u_m = e_m / m shrinks to 0 while B T u_m = z for every m.

    T = diag(1^2, ..., dim^2) and B x = <x, z> z with z = sum e_n / n (not
    normalized).  Arithmetic is exact (rationals), so the image gap is
    identically zero.  Returns the table and z.
    """
    if m_max < 1 or dim < 2 or m_max > dim:
        raise InputError("need 1 <= m_max <= dim and dim >= 2")
    z = [Fraction(1, k) for k in range(1, dim + 1)]
    rows = []
    for m in range(1, m_max + 1):
        # u_m has a single nonzero coordinate 1/m at index m
        tu_m = m * m * Fraction(1, m)
        coeff = tu_m * z[m - 1]
        gap = max(abs(coeff * zk - zk) for zk in z)
        rows.append(PreclosedRow(m, Fraction(1, m), gap))
    return rows, z

"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` and shape
``(rows, cols)``; :func:`as_cmat` is the single entry point that coerces
and validates them.  All functions are pure and never modify their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InputError

CMat = np.ndarray

DEFAULT_TOL = 1e-10
CHAR_POLY_MAX_SIZE = 64
ROOT_TOL = 1e-12
ROOT_MAX_SWEEPS = 500
ROOT_START_ANGLE = 0.4


def as_cmat(a) -> CMat:
    """Return ``a`` as a 2-D complex128 array (a copy only when needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InputError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def _square(a, name="matrix") -> CMat:
    m = as_cmat(a)
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be square, got shape {m.shape}")
    return m


def identity(n: int) -> CMat:
    return np.eye(n, dtype=np.complex128)


def unit_matrix(n: int, i: int, j: int) -> CMat:
    """Matrix unit E_ij (zero-based indices)."""
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def adjoint(a) -> CMat:
    return as_cmat(a).conj().T


def matmul(a, b) -> CMat:
    a, b = as_cmat(a), as_cmat(b)
    if a.shape[1] != b.shape[0]:
        raise InputError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def commutator(a, b) -> CMat:
    """Return ``AB - BA``."""
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise InputError(f"commutator of {a.shape} and {b.shape}")
    return a @ b - b @ a


def trace(a) -> complex:
    return complex(np.trace(_square(a)))


def normalized_trace(a) -> complex:
    a = _square(a)
    return complex(np.trace(a)) / a.shape[0]


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Entrywise equality up to ``tol`` scaled by the larger entry magnitude (at least 1)."""
    a, b = as_cmat(a), as_cmat(b)
    if a.shape != b.shape:
        return False
    scale = max(1.0, max_abs(a), max_abs(b))
    return max_abs(a - b) <= tol * scale


def is_hermitian(a, tol: float = 1e-9) -> bool:
    a = as_cmat(a)
    if a.shape[0] != a.shape[1]:
        return False
    return max_abs(a - a.conj().T) <= tol * max(1.0, max_abs(a))


def operator_norm(a, method: str = "jacobi") -> float:
    """Largest singular value of ``a``.

    The default route takes the square root of the top eigenvalue of A*A
    from the Jacobi eigensolver in :mod:`opspectra.spectral`.  ``method="power"``
    uses a self-contained power iteration instead; it is also the fallback when
    the Jacobi sweep limit is hit.
    """
    a = as_cmat(a)
    if not np.any(a):
        return 0.0
    gram = a.conj().T @ a
    if method == "jacobi":
        from .spectral import hermitian_eigvals

        try:
            top = float(hermitian_eigvals(gram)[-1])
        except ConvergenceError:
            top = _power_top_eigenvalue(gram)
    elif method == "power":
        top = _power_top_eigenvalue(gram)
    else:
        raise InputError(f"unknown operator_norm method {method!r}")
    return float(np.sqrt(max(top, 0.0)))


def _power_top_eigenvalue(gram: CMat, max_iter: int = 20000, rtol: float = 1e-15) -> float:
    n = gram.shape[0]
    # deterministic start with no special alignment to the standard basis
    v = np.ones(n, dtype=np.complex128) + 1j * np.linspace(0.1, 0.9, n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(new - lam) <= rtol * abs(new):
            return new
        lam = new
    return lam


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial with coefficients in ascending degree."""

    coefficients: tuple

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coefficients)
        if not c:
            raise InputError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=np.complex128)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(z)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc


def char_poly(a) -> Polynomial:
    """Monic characteristic polynomial det(zI - A) by the Faddeev-LeVerrier recurrence."""
    a = _square(a)
    n = a.shape[0]
    if n > CHAR_POLY_MAX_SIZE:
        raise InputError(f"char_poly limited to size {CHAR_POLY_MAX_SIZE}, got {n}")
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ m) / k
    return Polynomial(tuple(coeffs))


def poly_roots(p: Polynomial | Sequence[complex], tol: float = ROOT_TOL,
               max_sweeps: int = ROOT_MAX_SWEEPS) -> np.ndarray:
    """All complex roots of ``p`` (with multiplicity) by Durand-Kerner iteration.

    Iteration stops when every Weierstrass correction is below ``tol`` relative
    to max(1, |root|), or when every residual |p(z)| is at the rounding level
    of its evaluation (clustered roots cannot be resolved further).
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(tuple(p))
    c = p.as_array()
    if p.degree < 1:
        raise InputError("poly_roots needs degree >= 1")
    if c[-1] == 0:
        raise InputError("leading coefficient is zero")
    c = c / c[-1]
    n = p.degree
    monic = Polynomial(tuple(c))
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(n) / n + ROOT_START_ANGLE))
    absc = np.abs(c)
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        w = monic(z) / np.prod(diff, axis=1)
        z = z - w
        if np.all(np.abs(w) < tol * np.maximum(1.0, np.abs(z))):
            return z
        resid = np.abs(monic(z))
        bound = Polynomial(tuple(absc))(np.abs(z)).real
        if np.all(resid <= 8 * n * eps * bound):
            return z
    raise ConvergenceError(
        f"Durand-Kerner did not converge in {max_sweeps} sweeps",
        residuals=np.abs(monic(z)),
    )


def random_cmat(rng: np.random.Generator, rows: int, cols: int | None = None) -> CMat:
    """Complex Gaussian matrix scaled so the operator norm is O(1)."""
    cols = rows if cols is None else cols
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return g / np.sqrt(2.0 * max(rows, cols))


def random_hermitian(rng: np.random.Generator, n: int) -> CMat:
    g = random_cmat(rng, n)
    return (g + g.conj().T) / 2.0


def random_unitary(rng: np.random.Generator, n: int) -> CMat:
    q, r = np.linalg.qr(random_cmat(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))

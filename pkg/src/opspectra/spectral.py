"""Finite-dimensional spectral theory.

Hermitian eigendecomposition by cyclic Jacobi rotations, spectral
resolutions {E_lambda}, the pointwise functional calculus, one-parameter
unitary groups exp(itH), polar decomposition and range/null projections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._jacobi import jacobi_hermitian
from .errors import ConvergenceError, NotHermitianError
from .numkernel import CMat, _square, as_cmat, is_hermitian, max_abs

JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-9
MERGE_TOL = 1e-8
RANK_CUT = 1e-10
ORDER_TOL = 1e-9


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    basis: CMat
    sweeps: int = 0

    def reconstruct(self) -> CMat:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


def _checked_hermitian(a, tol: float = HERMITIAN_TOL) -> CMat:
    a = _square(a)
    if not is_hermitian(a, tol):
        raise NotHermitianError(
            f"matrix is not self-adjoint: max|A - A*| = {max_abs(a - a.conj().T):.3e}"
        )
    return (a + a.conj().T) / 2.0


def hermitian_eigen(a, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Full eigensystem of a self-adjoint matrix.

    Raises NotHermitianError when ``a`` is not self-adjoint to ``tol`` and
    ConvergenceError (with the off-diagonal mass) after 100 sweeps.
    """
    h = _checked_hermitian(a, tol)
    work = np.array(h, dtype=np.complex128, order="C")
    d, v, sweeps, off = jacobi_hermitian(work, JACOBI_REL_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps", residuals=[off]
        )
    order = np.argsort(d, kind="stable")
    return HermitianEigen(d[order], v[:, order], sweeps)


def hermitian_eigvals(a) -> np.ndarray:
    return hermitian_eigen(a).eigenvalues


def spectral_radius_hermitian(a) -> float:
    lam = hermitian_eigvals(a)
    return float(max(abs(lam[0]), abs(lam[-1])))


@dataclass(frozen=True)
class SpectralResolution:
    """Right-continuous spectral family of a Hermitian matrix.

    ``projections[i]`` is E at ``thresholds[i]``: the projection onto the sum
    of eigenspaces with eigenvalue <= thresholds[i].  The last one is I.
    """

    thresholds: np.ndarray
    projections: tuple
    eigen: HermitianEigen
    groups: tuple  # index ranges into eigen.eigenvalues per threshold

    @property
    def dim(self) -> int:
        return self.eigen.basis.shape[0]

    def at(self, lam: float) -> CMat:
        """E_lambda for arbitrary real lambda (0 below the spectrum)."""
        i = int(np.searchsorted(self.thresholds, lam, side="right")) - 1
        if i < 0:
            return np.zeros((self.dim, self.dim), dtype=np.complex128)
        return self.projections[i]

    def interval(self, lo: float, hi: float) -> CMat:
        """Spectral projection for the closed interval [lo, hi]."""
        lam = self.eigen.eigenvalues
        u = self.eigen.basis[:, (lam >= lo - self._merge_slack()) & (lam <= hi + self._merge_slack())]
        return u @ u.conj().T

    def _merge_slack(self) -> float:
        lam = self.eigen.eigenvalues
        return MERGE_TOL * max(1.0, float(np.max(np.abs(lam))))

    def increments(self) -> list:
        """E_{lambda_i} - E_{lambda_{i-1}}: the eigenprojections."""
        out, prev = [], np.zeros((self.dim, self.dim), dtype=np.complex128)
        for e in self.projections:
            out.append(e - prev)
            prev = e
        return out


def spectral_resolution(a, merge_tol: float = MERGE_TOL) -> SpectralResolution:
    eig = hermitian_eigen(a)
    lam, u = eig.eigenvalues, eig.basis
    n = lam.size
    scale = max(1.0, float(np.max(np.abs(lam))))
    groups, start = [], 0
    for i in range(1, n + 1):
        if i == n or lam[i] - lam[i - 1] > merge_tol * scale:
            groups.append((start, i))
            start = i
    thresholds = np.array([lam[s:e].mean() for s, e in groups])
    projections = []
    for _, e in groups:
        ue = u[:, :e]
        projections.append(ue @ ue.conj().T)
    # the full family sums to I exactly, not merely to rounding
    projections[-1] = np.eye(n, dtype=np.complex128)
    return SpectralResolution(thresholds, tuple(projections), eig, tuple(groups))


def _min_eig(h) -> float:
    return float(hermitian_eigvals((h + h.conj().T) / 2.0)[0])


def resolution_report(a, res: SpectralResolution | None = None) -> dict:
    """Gaps for the finite-dimensional spectral-resolution properties.

    * ``bounds``: E = 0 below -||A|| and E = I at ||A||
    * ``monotone``: max ||E_l E_l' - E_min(l,l')|| over threshold pairs
    * ``right_continuity``: ||E_{l+eps} - E_l|| with eps below half the minimal gap
    * ``order_lower``/``order_upper``: most negative eigenvalue of
      l E_l - A E_l and of A(I - E_l) - l(I - E_l), relative to ||A||
    * ``reconstruction``: ||A - sum l_i (E_i - E_{i-1})|| relative to ||A||
    """
    a = _checked_hermitian(a)
    res = spectral_resolution(a) if res is None else res
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    norm = max(abs(res.eigen.eigenvalues[0]), abs(res.eigen.eigenvalues[-1]))
    scale = max(1.0, norm)

    bounds = max(max_abs(res.at(-norm - 1e-6 * scale)), max_abs(res.at(norm) - eye))

    monotone = 0.0
    for i, ei in enumerate(res.projections):
        for j, ej in enumerate(res.projections):
            monotone = max(monotone, max_abs(ei @ ej - res.projections[min(i, j)]))

    gaps = np.diff(res.thresholds)
    eps = 0.25 * float(gaps.min()) if gaps.size else 1.0
    right = max(max_abs(res.at(t + eps) - e) for t, e in zip(res.thresholds, res.projections))

    lower = upper = 0.0
    for t, e in zip(res.thresholds, res.projections):
        lower = min(lower, _min_eig(t * e - a @ e) / scale)
        f = eye - e
        upper = min(upper, _min_eig(a @ f - t * f) / scale)

    recon = sum(t * d for t, d in zip(res.thresholds, res.increments()))
    reconstruction = max_abs(a - recon) / scale
    idem = max(max(max_abs(e @ e - e), max_abs(e - e.conj().T)) for e in res.projections)
    return {
        "bounds": bounds,
        "idempotent": idem,
        "monotone": monotone,
        "right_continuity": right,
        "order_lower": lower,
        "order_upper": upper,
        "reconstruction": reconstruction,
    }


def fun_calculus(a, f: Callable[[np.ndarray], np.ndarray]) -> CMat:
    """basis . diag(f(eigenvalues)) . basis*  for self-adjoint ``a``."""
    eig = hermitian_eigen(a)
    vals = np.asarray(f(eig.eigenvalues), dtype=np.complex128)
    if vals.shape == ():
        vals = np.full(eig.eigenvalues.shape, vals)
    return (eig.basis * vals) @ eig.basis.conj().T


def unitary_group(h, t: float) -> CMat:
    """exp(itH)."""
    return fun_calculus(h, lambda lam: np.exp(1j * t * lam))


def generator_residual(h, x, t: float) -> tuple[float, float]:
    """||(U_t x - x)/t - iHx|| and the bound ||H||^2 ||x|| |t|."""
    h = as_cmat(h)
    x = np.asarray(x, dtype=np.complex128)
    u = unitary_group(h, t)
    resid = float(np.linalg.norm((u @ x - x) / t - 1j * (h @ x)))
    hn = spectral_radius_hermitian(h)
    return resid, hn * hn * float(np.linalg.norm(x)) * abs(t)


def singular_system(t) -> tuple[np.ndarray, CMat, CMat]:
    """Right singular vectors of ``t`` from the Jacobi eigensystem of T*T.

    Singular values are measured as ||T v_i|| rather than sqrt of the Gram
    eigenvalue, which keeps near-zero singular values at rounding level.
    Returns (sigma descending, V, T V).
    """
    t = as_cmat(t)
    eig = hermitian_eigen(t.conj().T @ t)
    v = eig.basis[:, ::-1]
    tv = t @ v
    sigma = np.linalg.norm(tv, axis=0)
    order = np.argsort(-sigma, kind="stable")
    return sigma[order], v[:, order], tv[:, order]


def _rank_threshold(sigma: np.ndarray, cut: float, scale: float | None) -> float:
    top = sigma[0] if sigma.size else 0.0
    return cut * (top if scale is None else scale)


def null_projection(t, cut: float = RANK_CUT, scale: float | None = None) -> CMat:
    """Projection onto the numerical null space: singular values below ``cut * scale``.

    ``scale`` defaults to ||T||.  Pass an external scale when T may be a
    rounding-level perturbation of zero, where a relative cut sees noise as rank.
    """
    sigma, v, _ = singular_system(t)
    thresh = _rank_threshold(sigma, cut, scale)
    keep = sigma < thresh if thresh > 0 else np.ones_like(sigma, dtype=bool)
    w = v[:, keep]
    return w @ w.conj().T


def range_projection(t, cut: float = RANK_CUT, scale: float | None = None) -> CMat:
    """Projection onto the closure of the range of ``t``.

    Spanned by T v_i for the singular values at or above ``cut * scale``
    (``scale`` defaults to ||T||), orthonormalized by QR.
    """
    sigma, _, tv = singular_system(t)
    thresh = _rank_threshold(sigma, cut, scale)
    keep = sigma >= thresh if thresh > 0 else np.zeros_like(sigma, dtype=bool)
    if not keep.any():
        n = as_cmat(t).shape[0]
        return np.zeros((n, n), dtype=np.complex128)
    q, _ = np.linalg.qr(tv[:, keep])
    return q @ q.conj().T


def range_null_projections(t, cut: float = RANK_CUT) -> tuple[CMat, CMat]:
    """(R(T), N(T)) for square ``t``.

    N(T) is spanned by right singular vectors, R(T) by images T v_i, so the
    identity R(T) = I - N(T*) is a genuine cross-check.
    """
    t = _square(t)
    return range_projection(t, cut), null_projection(t, cut)


def rn_identity_gaps(t, cut: float = RANK_CUT) -> dict:
    """Max-entry gaps of R(T)=I-N(T*), N(T)=I-R(T*), R(T*T)=R(T*), N(T*T)=N(T)."""
    t = _square(t)
    ts = t.conj().T
    eye = np.eye(t.shape[0], dtype=np.complex128)
    r_t, n_t = range_null_projections(t, cut)
    r_ts, n_ts = range_null_projections(ts, cut)
    tst = ts @ t
    # rank cut for T*T in terms of its own norm: sigma^2 scales quadratically
    r_tst, n_tst = range_null_projections(tst, cut)
    return {
        "R(T)=I-N(T*)": max_abs(r_t - (eye - n_ts)),
        "N(T)=I-R(T*)": max_abs(n_t - (eye - r_ts)),
        "R(T*T)=R(T*)": max_abs(r_tst - r_ts),
        "N(T*T)=N(T)": max_abs(n_tst - n_t),
    }


@dataclass(frozen=True)
class PolarParts:
    isometry: CMat
    modulus: CMat

    def product(self) -> CMat:
        return self.isometry @ self.modulus


def polar_decompose(t, cut: float = RANK_CUT) -> PolarParts:
    """T = V H with H = (T*T)^{1/2} and V a partial isometry.

    Built from the singular system: H = sum sigma_i v_i v_i* and
    V = sum (T v_i / sigma_i) v_i* over sigma_i >= cut * ||T||.  Taking
    sigma_i = ||T v_i|| instead of the square root of a Gram eigenvalue keeps
    null directions at rounding level rather than at its square root.
    """
    t = _square(t)
    sigma, v, tv = singular_system(t)
    h = (v * sigma) @ v.conj().T
    top = sigma[0] if sigma.size else 0.0
    keep = sigma >= cut * top if top > 0 else np.zeros_like(sigma, dtype=bool)
    iso = (tv[:, keep] / sigma[keep]) @ v[:, keep].conj().T
    return PolarParts(iso, (h + h.conj().T) / 2.0)


def polar_report(t, parts: PolarParts | None = None) -> dict:
    """Relative gaps of V*V = R(H), VV* = R(T), VH = T, and V*V = R(T*)."""
    t = _square(t)
    parts = polar_decompose(t) if parts is None else parts
    v, h = parts.isometry, parts.modulus
    scale = max(1.0, max_abs(t))
    return {
        "V*V=R(H)": max_abs(v.conj().T @ v - range_projection(h)),
        "VV*=R(T)": max_abs(v @ v.conj().T - range_projection(t)),
        "V*V=R(T*)": max_abs(v.conj().T @ v - range_projection(t.conj().T)),
        "VH=T": max_abs(v @ h - t) / scale,
    }

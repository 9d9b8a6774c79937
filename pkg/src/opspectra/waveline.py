"""Grid functions on an interval and the operators of the classic representation.

A :class:`GridFunction` samples a function at ``s_j = left + j*h`` with
``h = (right - left)/n``.  Inner products use the h-weighted rectangle rule.
Translations move by whole grid steps only, so ``translate`` is an exact
isometry on functions supported away from the window edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError

MIN_SAMPLES = 8
GRID_MULTIPLE_TOL = 1e-9
BOUNDARY_TOL = 1e-12
CORE_MARGIN = 10
ORTHOGONALITY_TOL = 1e-10
BLOWUP_SLOPE = -0.4
MONOTONE_SLACK = 0.05


@dataclass(frozen=True)
class GridFunction:
    left: float
    right: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        object.__setattr__(self, "values", v)
        if v.size < MIN_SAMPLES:
            raise InputError(f"grid needs at least {MIN_SAMPLES} samples, got {v.size}")
        if not self.right > self.left:
            raise InputError("grid interval must have right > left")

    @classmethod
    def sample(cls, func, left: float, right: float, n: int) -> "GridFunction":
        s = left + (right - left) / n * np.arange(n)
        return cls(left, right, func(s))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return (self.right - self.left) / self.n

    @property
    def s(self) -> np.ndarray:
        return self.left + self.h * np.arange(self.n)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.left, self.right, values)

    def inner(self, other: "GridFunction") -> complex:
        _same_grid(self, other)
        return complex(self.h * np.sum(self.values * np.conj(other.values)))

    def norm(self) -> float:
        return float(np.sqrt(self.h * np.sum(np.abs(self.values) ** 2)))

    def __add__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def _same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.n != g.n or not np.isclose(f.left, g.left) or not np.isclose(f.right, g.right):
        raise InputError("grid functions live on different grids")


def grid_steps(f: GridFunction, t: float) -> int:
    """Number of grid steps in the shift ``t``; rejects non-multiples of h."""
    k = t / f.h
    kr = round(k)
    if abs(k - kr) > GRID_MULTIPLE_TOL * max(1.0, abs(k)):
        raise InputError(
            f"shift {t!r} is not a multiple of h={f.h!r}; nearest admissible shift is {kr * f.h!r}"
        )
    return int(kr)


def _shift(values: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(values)
    n = values.size
    if k >= 0:
        if k < n:
            out[: n - k] = values[k:]
    else:
        if -k < n:
            out[-k:] = values[: n + k]
    return out


def translate(f: GridFunction, t: float) -> GridFunction:
    """(U_t f)(s) = f(s + t), zero-filled where s + t leaves the window."""
    return f.with_values(_shift(f.values, grid_steps(f, t)))


def _valid(n: int, k: int) -> slice:
    # samples whose shifted partner s + t stays inside the window
    return slice(0, n - k) if k >= 0 else slice(-k, n)


def _local_norm(values: np.ndarray, h: float, sl: slice) -> float:
    return float(np.sqrt(h * np.sum(np.abs(values[sl]) ** 2)))


def central_derivative(f: GridFunction) -> np.ndarray:
    v = f.values
    d = np.zeros_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * f.h)
    d[0] = v[1] / (2.0 * f.h)
    d[-1] = -v[-2] / (2.0 * f.h)
    return d


def spectral_derivative(f: GridFunction) -> np.ndarray:
    n = f.n
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=f.h)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(f.values))


@dataclass(frozen=True)
class DomainDiagnostic:
    """Difference-quotient behaviour of t^-1 (U_t f - f) as t decreases to h.

    The verdict thresholds (slope cut -0.4, 5% monotonicity slack) are
    heuristics; membership in the generator domain is not decidable from
    samples.
    """

    t_samples: np.ndarray
    residuals: np.ndarray
    quotient_norms: np.ndarray
    verdict: str
    blowup_exponent: float
    heuristic: str = "heuristic verdict: slope<=-0.4 blowing_up; monotone within 5% converging"


def difference_quotient_diagnostic(f: GridFunction, g: GridFunction | None = None,
                                   k_max: int | None = None) -> DomainDiagnostic:
    """Residuals ||t^-1 (U_t f - f) - g|| for t = K h, K h / 2, ..., h.

    Without ``g`` the central-difference derivative of ``f`` is the reference.
    Norms are taken over samples whose shifted partner stays in the window.
    """
    if g is not None:
        _same_grid(f, g)
        ref = g.values
    else:
        ref = central_derivative(f)
    if k_max is None:
        k_max = 1 << max(1, int(np.log2(max(f.n // 16, 2))))
        k_max = min(k_max, 64)
    ks = []
    k = int(k_max)
    while k >= 1:
        ks.append(k)
        k //= 2
    ts, resid, qnorm = [], [], []
    for k in ks:
        t = k * f.h
        q = (_shift(f.values, k) - f.values) / t
        sl = _valid(f.n, k)
        ts.append(t)
        resid.append(_local_norm(q - ref, f.h, sl))
        qnorm.append(_local_norm(q, f.h, sl))
    ts, resid, qnorm = np.array(ts), np.array(resid), np.array(qnorm)

    if np.all(qnorm == 0.0):
        slope = 0.0
    else:
        pos = qnorm > 0
        slope = float(np.polyfit(np.log(ts[pos]), np.log(qnorm[pos]), 1)[0]) if pos.sum() > 1 else 0.0

    if np.all(resid == 0.0):
        verdict = "converging"
    elif slope <= BLOWUP_SLOPE:
        verdict = "blowing_up"
    else:
        monotone = bool(np.all(resid[1:] <= resid[:-1] * (1.0 + MONOTONE_SLACK)))
        small = resid[-1] < 10.0 * resid[0] * (f.h / ts[0])
        verdict = "converging" if monotone and small else "inconclusive"
    return DomainDiagnostic(ts, resid, qnorm, verdict, slope)


@dataclass(frozen=True)
class JumpRow:
    n: int
    t_n: float
    squared_norm: float
    bound: float


def jump_blowup_profile(f: GridFunction, jump_point: float,
                        n_values: Sequence[int] | None = None) -> list[JumpRow]:
    """Squared norms ||t_n^-1 (U_{t_n} f - f)||^2 for t_n close to 1/(n - 1).

    t_n is rounded *down* to a multiple of h so that the discrete shift never
    exceeds 1/(n - 1).  Rows stop once t_n < 2h.  ``bound`` is n - 2 + 1/n,
    the lower bound for a unit jump of width at least 1.
    """
    if not f.left < jump_point < f.right:
        raise InputError("jump_point must lie inside the grid interval")
    rows = []
    n_iter = n_values if n_values is not None else range(2, 10 ** 9)
    for n in n_iter:
        k = int(np.floor(1.0 / ((n - 1) * f.h) + GRID_MULTIPLE_TOL))
        if k < 2:
            if n_values is None:
                break
            continue
        t = k * f.h
        q = (_shift(f.values, k) - f.values) / t
        sq = _local_norm(q, f.h, _valid(f.n, k)) ** 2
        rows.append(JumpRow(int(n), t, sq, n - 2 + 1.0 / n))
    return rows


def position_apply(f: GridFunction) -> GridFunction:
    return f.with_values(f.s * f.values)


def _check_boundary(f: GridFunction, margin: int, what: str) -> None:
    scale = max(1.0, float(np.max(np.abs(f.values))))
    edge = np.concatenate([f.values[:margin], f.values[-margin:]])
    if np.max(np.abs(edge)) > BOUNDARY_TOL * scale:
        raise InputError(f"{what}: function does not vanish within {margin} samples of the boundary")


def momentum_apply(f: GridFunction, mode: str = "central",
                   require_decay: bool = True) -> GridFunction:
    """P f = i f'.

    ``mode="spectral"`` differentiates through the discrete Fourier multiplier
    and so treats the window as periodic; by default it insists that ``f``
    vanishes at both ends.  Pass ``require_decay=False`` for functions that are
    genuinely periodic on the window.
    """
    if mode == "central":
        d = central_derivative(f)
    elif mode == "spectral":
        if require_decay:
            _check_boundary(f, 1, "spectral momentum")
        d = spectral_derivative(f)
    else:
        raise InputError(f"unknown momentum mode {mode!r}")
    return f.with_values(1j * d)


def heisenberg_residual(f: GridFunction, mode: str = "spectral") -> float:
    """||(QP - PQ) f + i f|| / ||f|| for f supported inside the core margin."""
    nf = f.norm()
    if nf == 0.0:
        return 0.0
    _check_boundary(f, CORE_MARGIN, "heisenberg_residual")
    qp = position_apply(momentum_apply(f, mode))
    pq = momentum_apply(position_apply(f), mode)
    return (qp - pq + 1j * f).norm() / nf


def position_matrix(left: float, right: float, n: int) -> np.ndarray:
    s = left + (right - left) / n * np.arange(n)
    return np.diag(s).astype(np.complex128)


def momentum_matrix(left: float, right: float, n: int, mode: str = "central") -> np.ndarray:
    """Matrix of ``momentum_apply`` on the n-point grid (Hermitian in both modes)."""
    cols = []
    for j in range(n):
        e = np.zeros(n, dtype=np.complex128)
        e[j] = 1.0
        cols.append(momentum_apply(GridFunction(left, right, e), mode, require_decay=False).values)
    m = np.array(cols).T
    return (m + m.conj().T) / 2.0


def volterra_apply(f: GridFunction) -> GridFunction:
    """(K f)(s) = integral of f over [0, s], cumulative trapezoid rule."""
    if not (np.isclose(f.left, 0.0) and np.isclose(f.right, 1.0)):
        raise InputError("volterra_apply is defined on [0, 1]")
    v = f.values
    k = np.zeros_like(v)
    k[1:] = np.cumsum(0.5 * f.h * (v[1:] + v[:-1]))
    return f.with_values(k)


def constant_unit(f: GridFunction) -> GridFunction:
    """The unit vector u = 1 on the grid of ``f``."""
    return f.with_values(np.ones(f.n, dtype=np.complex128))


def project_out_constant(f: GridFunction) -> GridFunction:
    u = constant_unit(f)
    return f - u * (f.inner(u) / u.inner(u))


def d3_skewness_check(f1: GridFunction, f2: GridFunction,
                      a1: complex = 0.0, a2: complex = 0.0) -> complex:
    """<D3 g1, g2> + <g1, D3 g2> for g_i = K f_i + a_i u, where D3 g_i = f_i.

    Both f_i must already be orthogonal to the constants
    (see :func:`project_out_constant`).
    """
    _same_grid(f1, f2)
    u = constant_unit(f1)
    for name, fi in (("f1", f1), ("f2", f2)):
        if abs(fi.inner(u)) > ORTHOGONALITY_TOL * max(1.0, fi.norm()):
            raise InputError(f"{name} is not orthogonal to the constant function")
    g1 = volterra_apply(f1) + u * a1
    g2 = volterra_apply(f2) + u * a2
    return f1.inner(g2) + g1.inner(f2)


def averaging_convergence(f: GridFunction, ts: Sequence[float]) -> list[float]:
    """||A_t f - f|| with A_t f(x) = t^-1 * integral of f over [x, x + t].

    Uses rectangle partial sums; x ranges over samples with x + t in the window.
    """
    csum = np.concatenate([[0.0], np.cumsum(f.values)])
    out = []
    for t in ts:
        k = grid_steps(f, t)
        if k <= 0:
            raise InputError("averaging lengths must be positive")
        avg = (csum[k:] - csum[:-k]) / k
        m = avg.size
        out.append(float(np.sqrt(f.h * np.sum(np.abs(avg - f.values[:m]) ** 2))))
    return out

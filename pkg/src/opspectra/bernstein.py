"""Bernstein polynomials B_n(f) on [0, 1], their derivatives and moment identities."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

UNIFORM_GRID = 1001


def bernstein_basis(n: int, x) -> np.ndarray:
    """Basis values b_{k,n}(x) for k = 0..n, shape ``x.shape + (n + 1,)``.

    Built by repeated degree raising, b_{k,j} = (1-x) b_{k,j-1} + x b_{k-1,j-1},
    which only ever forms convex combinations of nonnegative numbers.
    """
    x = np.asarray(x, dtype=float)
    b = np.zeros(x.shape + (n + 1,))
    b[..., 0] = 1.0
    xe = x[..., None]
    for j in range(1, n + 1):
        b[..., 1 : j + 1] = (1.0 - xe) * b[..., 1 : j + 1] + xe * b[..., :j]
        b[..., 0] = (1.0 - x) * b[..., 0]
    return b


def _check_unit(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise InputError("Bernstein evaluation needs 0 <= x <= 1")
    return x


@dataclass(frozen=True)
class BernsteinModel:
    """Degree n and the samples f(k/n), optionally transported from [-N, N].

    With ``half_width`` N set, evaluation points y in [-N, N] are pulled back
    through phi^-1(y) = (y + N) / 2N, where phi(x) = 2N x - N.
    """

    degree: int
    samples: np.ndarray
    half_width: float | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).reshape(-1)
        object.__setattr__(self, "samples", s)
        if self.degree < 1:
            raise InputError("Bernstein degree must be >= 1")
        if s.size != self.degree + 1:
            raise InputError(f"need {self.degree + 1} samples, got {s.size}")
        if not np.all(np.isfinite(s)):
            raise InputError("samples must be finite")
        if self.half_width is not None and self.half_width <= 0:
            raise InputError("half_width must be positive")

    @classmethod
    def from_function(cls, f: Callable, n: int) -> "BernsteinModel":
        if n < 1:
            raise InputError("Bernstein degree must be >= 1")
        return cls(n, f(np.arange(n + 1) / n))

    @property
    def source_interval(self) -> tuple[float, float]:
        if self.half_width is None:
            return (0.0, 1.0)
        return (-self.half_width, self.half_width)

    def phi(self, x):
        n_ = self.half_width
        return np.asarray(x, dtype=float) if n_ is None else 2.0 * n_ * np.asarray(x) - n_

    def phi_inverse(self, y):
        y = np.asarray(y, dtype=float)
        if self.half_width is None:
            return y
        n_ = self.half_width
        if np.any(y < -n_) or np.any(y > n_):
            raise InputError(f"evaluation point outside [-{n_}, {n_}]")
        return (y + n_) / (2.0 * n_)

    def __call__(self, y):
        return bernstein_eval(self, self.phi_inverse(y))

    def derivative(self, y):
        """d/dy of the transported polynomial (chain-rule factor 1/2N)."""
        d = bernstein_derivative_eval(self, self.phi_inverse(y))
        return d if self.half_width is None else d / (2.0 * self.half_width)


def bernstein_eval(model: BernsteinModel, x):
    """B_n(f)(x) for x in [0, 1] (no transport applied)."""
    x = _check_unit(x)
    return bernstein_basis(model.degree, x) @ model.samples


def bernstein_derivative_eval(model: BernsteinModel, x):
    """B_n'(f)(x) = n * sum_k (f((k+1)/n) - f(k/n)) b_{k,n-1}(x)."""
    x = _check_unit(x)
    n = model.degree
    return n * (bernstein_basis(n - 1, x) @ np.diff(model.samples))


def bernstein_derivative_kernel(model: BernsteinModel, x: float) -> float:
    """The derivative through the kernel n sum C(n,k)(k/n - x) x^(k-1) (1-x)^(n-k-1) f(k/n).

    Has removable singularities at x = 0 and x = 1; kept as an independent
    check on :func:`bernstein_derivative_eval` at interior points.
    """
    if not 0.0 < x < 1.0:
        raise InputError("kernel form is evaluated at interior points only")
    n = model.degree
    total = 0.0
    for k in range(n + 1):
        total += comb(n, k) * (k / n - x) * x ** (k - 1) * (1.0 - x) ** (n - k - 1) * model.samples[k]
    return n * total


def transport_interval(f: Callable, half_width: float, n: int) -> BernsteinModel:
    """Model of f on [-N, N] through phi(x) = 2N x - N: samples (f o phi)(k/n)."""
    if n < 1:
        raise InputError("Bernstein degree must be >= 1")
    if half_width <= 0:
        raise InputError("half_width must be positive")
    x = np.arange(n + 1) / n
    return BernsteinModel(n, f(2.0 * half_width * x - half_width), half_width)


def _direct_moment(n: int, x: float, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """sum_k C(n,k) x^k (1-x)^(n-k) g(k/n), summed term by term."""
    k = np.arange(n + 1)
    w = np.array([comb(n, int(j)) for j in k], dtype=float) * x ** k * (1.0 - x) ** (n - k)
    return float(np.sum(w * g(k / n)))


def moment_closed_forms(n: int, x: float) -> dict[str, tuple[Callable, float]]:
    """Each identity as (summand g, closed-form value) at (n, x)."""
    return {
        "partition_of_unity": (lambda u: np.ones_like(u), 1.0),
        "first_moment": (lambda u: u, x),
        "second_moment": (lambda u: u ** 2, (n - 1) * x ** 2 / n + x / n),
        "third_moment": (lambda u: u ** 3,
                (n - 1) * (n - 2) * x ** 3 / n ** 2 + 3 * (n - 1) * x ** 2 / n ** 2 + x / n ** 2),
        "fourth_moment": (lambda u: u ** 4,
                (n - 1) * (n - 2) * (n - 3) * x ** 4 / n ** 3
                + 6 * (n - 1) * (n - 2) * x ** 3 / n ** 3
                + 7 * (n - 1) * x ** 2 / n ** 3 + x / n ** 3),
        "central_second_moment": (lambda u: (u - x) ** 2, x * (1 - x) / n),
        "central_fourth_moment": (lambda u: (u - x) ** 4, x * (1 - x) * ((3 * n - 6) * x * (1 - x) + 1) / n ** 3),
    }


@dataclass(frozen=True)
class MomentReport:
    n: int
    max_gap: dict
    values: dict  # identity -> list of (x, direct, closed)

    def passed(self, tol_per_degree: float = 1e-10) -> bool:
        return all(g <= tol_per_degree * self.n for g in self.max_gap.values())


def moment_identities_check(n: int, xs: Sequence[float]) -> MomentReport:
    """Direct summation against the closed forms of the moment identities."""
    if n < 1:
        raise InputError("n must be >= 1")
    gaps: dict[str, float] = {}
    values: dict[str, list] = {}
    for x in xs:
        for name, (g, closed) in moment_closed_forms(n, float(x)).items():
            direct = _direct_moment(n, float(x), g)
            gaps[name] = max(gaps.get(name, 0.0), abs(direct - closed))
            values.setdefault(name, []).append((float(x), direct, closed))
    return MomentReport(n, gaps, values)


def uniform_error(f: Callable, fprime: Callable, n: int,
                  points: int = UNIFORM_GRID) -> tuple[float, float]:
    """sup |B_n(f) - f| and sup |B_n'(f) - f'| over an equispaced grid of [0, 1]."""
    x = np.linspace(0.0, 1.0, points)
    model = BernsteinModel.from_function(f, n)
    b = bernstein_basis(n, x)
    sup_err = float(np.max(np.abs(b @ model.samples - f(x))))
    db = n * (bernstein_basis(n - 1, x) @ np.diff(model.samples))
    sup_deriv = float(np.max(np.abs(db - fprime(x))))
    return sup_err, sup_deriv


def approximant_table(f: Callable, fprime: Callable, n: int, points: int = 101) -> list[tuple]:
    """Rows (x, f, B_n, f', B_n') for CSV export."""
    x = np.linspace(0.0, 1.0, points)
    model = BernsteinModel.from_function(f, n)
    bn = bernstein_eval(model, x)
    dbn = bernstein_derivative_eval(model, x)
    return list(zip(x.tolist(), np.asarray(f(x), float).tolist(), bn.tolist(),
                    np.asarray(fprime(x), float).tolist(), dbn.tolist()))

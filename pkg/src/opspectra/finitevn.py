"""Matrix models of finite von Neumann algebras.

A finite direct sum M_{n1} + ... + M_{nm} of full matrix algebras is the
general finite-dimensional von Neumann algebra.  Its center is C^m, the
center-valued trace is the tuple of normalized block traces, and two
projections are equivalent exactly when their block ranks agree.

This is only a finite shadow of the type II_1 setting: at matrix scale every
statement here reduces to trace cyclicity and rank arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NotEquivalentError
from .numkernel import as_cmat, max_abs, operator_norm, random_unitary
from .spectral import hermitian_eigen, null_projection, range_projection

PROJECTION_TOL = 1e-9


@dataclass(frozen=True)
class BlockAlgebra:
    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise InputError(f"block dimensions must be positive, got {self.block_dims}")
        object.__setattr__(self, "block_dims", dims)

    def element(self, blocks: Sequence) -> "BlockElement":
        return BlockElement(self, tuple(as_cmat(b) for b in blocks))

    def identity(self) -> "BlockElement":
        return self.element([np.eye(d) for d in self.block_dims])

    def zero(self) -> "BlockElement":
        return self.element([np.zeros((d, d)) for d in self.block_dims])

    def random_element(self, rng: np.random.Generator) -> "BlockElement":
        return self.element([
            (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
            for d in self.block_dims
        ])

    def random_self_adjoint(self, rng: np.random.Generator) -> "BlockElement":
        x = self.random_element(rng)
        return (x + x.adjoint()) * 0.5

    def random_projection(self, rng: np.random.Generator, ranks: Sequence[int] | None = None) -> "BlockElement":
        blocks = []
        for i, d in enumerate(self.block_dims):
            r = int(rng.integers(0, d + 1)) if ranks is None else int(ranks[i])
            u = random_unitary(rng, d)[:, :r]
            blocks.append(u @ u.conj().T)
        return self.element(blocks)


@dataclass(frozen=True)
class BlockElement:
    algebra: BlockAlgebra
    blocks: tuple

    def __post_init__(self):
        if len(self.blocks) != len(self.algebra.block_dims):
            raise InputError("number of blocks does not match the algebra")
        for b, d in zip(self.blocks, self.algebra.block_dims):
            if b.shape != (d, d):
                raise InputError(f"block of shape {b.shape} where ({d}, {d}) expected")

    def _lift(self, other, op):
        if isinstance(other, BlockElement):
            if other.algebra != self.algebra:
                raise InputError("elements of different algebras")
            return BlockElement(self.algebra, tuple(op(a, b) for a, b in zip(self.blocks, other.blocks)))
        return BlockElement(self.algebra, tuple(op(a, other) for a in self.blocks))

    def __add__(self, other):
        return self._lift(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._lift(other, lambda a, b: a - b)

    def __mul__(self, scalar):
        return BlockElement(self.algebra, tuple(a * scalar for a in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self._lift(other, lambda a, b: a @ b)

    def adjoint(self) -> "BlockElement":
        return BlockElement(self.algebra, tuple(a.conj().T for a in self.blocks))

    def max_abs(self) -> float:
        return max(max_abs(b) for b in self.blocks)

    def norm(self) -> float:
        return max(operator_norm(b) for b in self.blocks)


@dataclass(frozen=True)
class CenterElement:
    scalars: tuple

    def __post_init__(self):
        object.__setattr__(self, "scalars", tuple(complex(s) for s in self.scalars))

    def as_array(self) -> np.ndarray:
        return np.array(self.scalars)

    def __sub__(self, other):
        return CenterElement(tuple(a - b for a, b in zip(self.scalars, other.scalars)))

    def __add__(self, other):
        return CenterElement(tuple(a + b for a, b in zip(self.scalars, other.scalars)))


def commutator(x: BlockElement, y: BlockElement) -> BlockElement:
    return x @ y - y @ x


def center_valued_trace(x: BlockElement) -> CenterElement:
    return CenterElement(tuple(np.trace(b) / b.shape[0] for b in x.blocks))


def _check_projection(e: BlockElement, tol: float = PROJECTION_TOL) -> None:
    for i, b in enumerate(e.blocks):
        if max_abs(b @ b - b) > tol or max_abs(b - b.conj().T) > tol:
            raise InputError(f"block {i} is not a projection")


def block_ranks(e: BlockElement) -> tuple:
    _check_projection(e)
    return tuple(int(np.sum(hermitian_eigen(b).eigenvalues > 0.5)) for b in e.blocks)


def dimension_function(e: BlockElement) -> CenterElement:
    """Delta(E): per-block rank over block size."""
    ranks = block_ranks(e)
    return CenterElement(tuple(r / d for r, d in zip(ranks, e.algebra.block_dims)))


def _range_basis(b: np.ndarray) -> np.ndarray:
    eig = hermitian_eigen(b)
    return eig.basis[:, eig.eigenvalues > 0.5]


def equivalence_witness(e: BlockElement, f: BlockElement) -> BlockElement:
    """Partial isometry V with V*V = E and VV* = F.

    Raises NotEquivalentError naming the first block where the ranks differ.
    """
    _check_projection(e)
    _check_projection(f)
    blocks = []
    for i, (be, bf) in enumerate(zip(e.blocks, f.blocks)):
        xe, xf = _range_basis(be), _range_basis(bf)
        if xe.shape[1] != xf.shape[1]:
            raise NotEquivalentError(
                f"block {i}: rank {xe.shape[1]} vs rank {xf.shape[1]}", block=i
            )
        blocks.append(xf @ xe.conj().T)
    return BlockElement(e.algebra, tuple(blocks))


def complement_equivalence(e: BlockElement, f: BlockElement) -> BlockElement:
    """Witness for I - E ~ I - F, given E ~ F."""
    equivalence_witness(e, f)
    one = e.algebra.identity()
    return equivalence_witness(one - e, one - f)


def witness_gaps(v: BlockElement, e: BlockElement, f: BlockElement) -> tuple[float, float]:
    return (v.adjoint() @ v - e).max_abs(), (v @ v.adjoint() - f).max_abs()


def _blockwise(fn, x: BlockElement) -> BlockElement:
    return BlockElement(x.algebra, tuple(fn(b) for b in x.blocks))


def lattice_ops(e: BlockElement, f: BlockElement) -> tuple[BlockElement, BlockElement]:
    """(E v F, E ^ F): range projection of E + F and its dual through complements."""
    one = e.algebra.identity()
    # projection sums have unit scale; a relative cut would read rounding noise as rank
    rp = lambda b: range_projection(b, scale=1.0)
    join = _blockwise(rp, e + f)
    meet = one - _blockwise(rp, (one - e) + (one - f))
    return join, meet


def domain_pullback_projection(t: BlockElement, e: BlockElement) -> tuple[BlockElement, dict]:
    """F = projection onto {x : Tx in range E} = null projection of (I - E)T.

    The report carries Delta(E), Delta(F) and whether Delta(E) <= Delta(F).
    """
    one = e.algebra.identity()
    x = (one - e) @ t
    f = BlockElement(e.algebra, tuple(null_projection(xb, scale=operator_norm(tb))
                                      for xb, tb in zip(x.blocks, t.blocks)))
    de, df = dimension_function(e), dimension_function(f)
    ok = all(a.real <= b.real + PROJECTION_TOL for a, b in zip(de.scalars, df.scalars))
    return f, {"delta_E": de, "delta_F": df, "dominated": ok}


def scalar_distance(x: BlockElement, a: complex) -> float:
    """max over blocks of ||x - aI|| (operator norm)."""
    return max(operator_norm(b - a * np.eye(b.shape[0])) for b in x.blocks)

"""Correlation tensors in the generalized Pauli basis.

For a state on subsystems with dimensions ``(d_1, ..., d_n)``::

    rho = 1/(d_1...d_n) sum_u t[u_1,...,u_n] A_{u_1} (x) ... (x) A_{u_n}
    t[u_1,...,u_n] = tr(rho A_{u_1}^dagger (x) ... (x) A_{u_n}^dagger)

Index 0 is the identity, so ``t[0,...,0] == 1`` and the block of ``t`` where
exactly the subsystems in ``S`` carry nonzero indices is the subset vector
``T^(S)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .states import DensityMatrix
from .weyl import basis_stack, dagger_stack

__all__ = [
    "CorrelationTensor",
    "SubsetVector",
    "corr_tensor",
    "subset_vector",
    "subset_block",
    "reconstruct",
    "bound_single",
    "bound_pair",
    "bound_multi",
    "subset_bound",
]

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    coeffs: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != tuple(d * d for d in dims):
            raise ValueError(f"coefficient shape {coeffs.shape} does not match dims {dims}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    def __repr__(self):
        return f"CorrelationTensor(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class SubsetVector:
    labels: tuple[int, ...]
    entries: np.ndarray

    @property
    def norm2(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm2)


def _einsum_letters(count: int) -> str:
    if count > len(_LETTERS):
        raise ValueError("too many subsystems for dense contraction")
    return _LETTERS[:count]


def corr_tensor(state: DensityMatrix) -> CorrelationTensor:
    dims = state.dims
    n = len(dims)
    letters = _einsum_letters(3 * n)
    rows, cols, idx = letters[:n], letters[n:2 * n], letters[2 * n:]
    operands = [state.matrix.reshape(dims + dims)]
    terms = [rows + cols]
    for s, d in enumerate(dims):
        operands.append(dagger_stack(d))
        # tr(rho X) = sum_{a,b} rho[a,b] X[b,a]
        terms.append(idx[s] + cols[s] + rows[s])
    expr = ",".join(terms) + "->" + idx
    coeffs = np.einsum(expr, *operands, optimize="greedy")
    return CorrelationTensor(coeffs, dims)


def reconstruct(t: CorrelationTensor) -> DensityMatrix:
    dims = t.dims
    n = len(dims)
    letters = _einsum_letters(3 * n)
    rows, cols, idx = letters[:n], letters[n:2 * n], letters[2 * n:]
    operands = [t.coeffs]
    terms = [idx]
    for s, d in enumerate(dims):
        operands.append(basis_stack(d))
        terms.append(idx[s] + rows[s] + cols[s])
    expr = ",".join(terms) + "->" + rows + cols
    size = math.prod(dims)
    mat = np.einsum(expr, *operands, optimize="greedy").reshape(size, size) / size
    return DensityMatrix(mat, dims)


def _check_subset(labels: Iterable[int], n: int) -> tuple[int, ...]:
    labels = tuple(int(s) for s in labels)
    if not labels:
        raise ValueError("subset must be nonempty")
    if list(labels) != sorted(set(labels)) or labels[0] < 1 or labels[-1] > n:
        raise ValueError(f"subset {labels} must be strictly ascending labels within 1..{n}")
    return labels


def subset_block(t: CorrelationTensor, labels: Iterable[int]) -> np.ndarray:
    """Coefficients with nonzero indices on ``labels`` and 0 elsewhere.

    Returns a view with one axis per label, in ascending label order.
    """
    labels = _check_subset(labels, t.n)
    sl = tuple(slice(1, None) if s in labels else 0 for s in range(1, t.n + 1))
    return t.coeffs[sl]


def subset_vector(t: CorrelationTensor, labels: Iterable[int]) -> SubsetVector:
    labels = _check_subset(labels, t.n)
    return SubsetVector(labels, subset_block(t, labels).reshape(-1).copy())


def bound_single(d: int) -> float:
    """Upper bound on ``||T^(s)||^2`` for one ``d``-level subsystem."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return float(d - 1)


def bound_pair(d1: int, d2: int) -> float:
    if d1 < 2 or d2 < 2:
        raise ValueError(f"dimensions must be >= 2, got {(d1, d2)}")
    return d1 * d2 * (1 - 1 / d1**2 - 1 / d2**2) + 1


def bound_multi(dims: Sequence[int]) -> float:
    """Upper bound on the full-correlation norm ``||T^(1...n)||^2``, n >= 2."""
    dims = [int(d) for d in dims]
    n = len(dims)
    if n < 2:
        raise ValueError(f"need at least two subsystems, got {n}")
    if min(dims) < 2:
        raise ValueError(f"dimensions must be >= 2, got {dims}")
    inv_sq = sum(1 / d**2 for d in dims)
    return (math.prod(dims) * (n - 1 - inv_sq) + 1) / (n - 1)


def subset_bound(dims: Sequence[int]) -> float:
    """Bound on ``||T^(S)||^2`` for a subset with the given dims (any size)."""
    if len(dims) == 1:
        return bound_single(dims[0])
    return bound_multi(dims)

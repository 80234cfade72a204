"""Generalized Pauli (Weyl) operators for a single d-dimensional system.

The operator with index ``u = d*i + j`` is the clock-and-shift product

    A_u = sum_m omega**(i*m) |m><m+j|,   omega = exp(2*pi*1j/d),

with every index reduced mod d. Products and adjoints of these operators are
again basis operators up to a power of omega, which is exposed here as plain
index arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PauliOp",
    "omega",
    "pauli_op",
    "pauli_matrix",
    "pauli_mul_index",
    "pauli_dagger_index",
    "basis_stack",
    "dagger_stack",
]


@dataclass(frozen=True, eq=False)
class PauliOp:
    """One generalized Pauli operator ``A_u`` of a ``dim``-level system."""

    dim: int
    index: int
    i: int
    j: int
    matrix: np.ndarray

    @property
    def decomposition(self) -> tuple[int, int]:
        return self.i, self.j


def _check_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _check_index(d: int, u: int) -> int:
    if int(u) != u or not 0 <= u < d * d:
        raise ValueError(f"operator index must lie in [0, {d * d - 1}] for d={d}, got {u!r}")
    return int(u)


def omega(d: int) -> complex:
    """Principal primitive d-th root of unity."""
    return np.exp(2j * np.pi / _check_dim(d))


def _phase(d: int, k: int) -> complex:
    # exact values at the quarter turns keep d=2 and d=4 free of 1e-16 noise
    k %= d
    if (4 * k) % d == 0:
        return (1, 1j, -1, -1j)[(4 * k) // d]
    return np.exp(2j * np.pi * k / d)


def pauli_matrix(d: int, u: int) -> np.ndarray:
    """Dense matrix of ``A_u`` (read-only, cached)."""
    d = _check_dim(d)
    u = _check_index(d, u)
    return basis_stack(d)[u]


@lru_cache(maxsize=None)
def pauli_op(d: int, u: int) -> PauliOp:
    d = _check_dim(d)
    u = _check_index(d, u)
    i, j = divmod(u, d)
    return PauliOp(dim=d, index=u, i=i, j=j, matrix=basis_stack(d)[u])


def pauli_mul_index(d: int, u: int, v: int) -> tuple[int, int]:
    """Return ``(k, w)`` with ``A_u @ A_v == omega**k * A_w``."""
    d = _check_dim(d)
    u = _check_index(d, u)
    v = _check_index(d, v)
    i, j = divmod(u, d)
    k, l = divmod(v, d)
    return (j * k) % d, d * ((i + k) % d) + (j + l) % d


def pauli_dagger_index(d: int, u: int) -> tuple[int, int]:
    """Return ``(k, w)`` with ``A_u^dagger == omega**k * A_w``."""
    d = _check_dim(d)
    u = _check_index(d, u)
    i, j = divmod(u, d)
    return (i * j) % d, d * ((d - i) % d) + (d - j) % d


@lru_cache(maxsize=None)
def basis_stack(d: int) -> np.ndarray:
    """All ``d**2`` operators stacked into a read-only ``(d*d, d, d)`` array."""
    d = _check_dim(d)
    ops = np.zeros((d * d, d, d), dtype=complex)
    rows = np.arange(d)
    for u in range(d * d):
        i, j = divmod(u, d)
        ops[u, rows, (rows + j) % d] = [_phase(d, i * m) for m in rows]
    ops.setflags(write=False)
    return ops


@lru_cache(maxsize=None)
def dagger_stack(d: int) -> np.ndarray:
    """Adjoints ``A_u^dagger`` built from the dagger index identity, read-only."""
    base = basis_stack(d)
    out = np.empty_like(base)
    for u in range(d * d):
        k, w = pauli_dagger_index(d, u)
        out[u] = _phase(d, k) * base[w]
    out.setflags(write=False)
    return out

"""Dense n-partite density matrices.

Subsystems are labelled 1..n in the order of ``dims``; the computational basis
index of ``|a_1 ... a_n>`` is row-major with the last subsystem varying
fastest, matching ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "PSD_TOL",
    "DensityMatrix",
    "ValidationReport",
    "MixtureSpec",
    "validate",
    "tensor",
    "mix",
    "partial_trace",
    "purity",
    "permute_subsystems",
    "maximally_mixed",
    "from_ket",
]

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Immutable dense density matrix with its subsystem dimensions.

    Only the shape is checked on construction; call :func:`validate` for the
    physical conditions.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must all be >= 2, got {self.dims!r}")
        mat = np.array(self.matrix, dtype=complex)
        size = int(np.prod(dims))
        if mat.shape != (size, size):
            raise ValueError(
                f"matrix shape {mat.shape} does not match dims {dims} (expected {size}x{size})"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    ok: bool

    def describe(self) -> str:
        problems = []
        if self.hermiticity_defect > HERMITIAN_TOL:
            problems.append(f"not Hermitian (max |rho - rho^dagger| = {self.hermiticity_defect:.3g})")
        if self.trace_defect > TRACE_TOL:
            problems.append(f"trace off by {self.trace_defect:.3g}")
        if self.min_eigenvalue < -PSD_TOL:
            problems.append(f"negative eigenvalue {self.min_eigenvalue:.3g}")
        return "; ".join(problems) if problems else "valid density matrix"


@dataclass(frozen=True)
class MixtureSpec:
    """Convex combination ``sum_s p_s rho_s``; checked by :func:`mix`."""

    components: tuple[tuple[float, DensityMatrix], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((float(w), s) for w, s in self.components))


def validate(state: DensityMatrix) -> ValidationReport:
    m = state.matrix
    herm = float(np.max(np.abs(m - m.conj().T)))
    trace_defect = float(abs(np.trace(m) - 1))
    min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    ok = herm <= HERMITIAN_TOL and trace_defect <= TRACE_TOL and min_eig >= -PSD_TOL
    return ValidationReport(herm, trace_defect, min_eig, ok)


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Kronecker product with concatenated dims."""
    if not states:
        raise ValueError("tensor needs at least one state")
    mat = states[0].matrix
    dims = list(states[0].dims)
    for s in states[1:]:
        mat = np.kron(mat, s.matrix)
        dims.extend(s.dims)
    return DensityMatrix(mat, tuple(dims))


def mix(spec: MixtureSpec | Iterable[tuple[float, DensityMatrix]]) -> DensityMatrix:
    components = spec.components if isinstance(spec, MixtureSpec) else tuple(spec)
    if not components:
        raise ValueError("mixture has no components")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights <= 0) or np.any(weights > 1):
        raise ValueError(f"mixture weights must lie in (0, 1], got {weights.tolist()}")
    if abs(weights.sum() - 1) > 1e-12:
        raise ValueError(f"mixture weights sum to {weights.sum()!r}, not 1")
    dims = components[0][1].dims
    for _, s in components:
        if s.dims != dims:
            raise ValueError(f"mixture components disagree on dims: {dims} vs {s.dims}")
    mat = sum(w * s.matrix for w, s in components)
    return DensityMatrix(mat, dims)


def _check_labels(labels: Iterable[int], n: int) -> tuple[int, ...]:
    labels = tuple(sorted(int(s) for s in labels))
    if not labels:
        raise ValueError("label set must be nonempty")
    if len(set(labels)) != len(labels) or labels[0] < 1 or labels[-1] > n:
        raise ValueError(f"labels {labels} must be distinct and within 1..{n}")
    return labels


def partial_trace(state: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the 1-based subsystem labels in ``keep``."""
    keep = _check_labels(keep, state.n)
    n = state.n
    t = state.matrix.reshape(state.dims + state.dims)
    # einsum subscripts: row axes 0..n-1, column axes n..2n-1; traced pairs share a letter
    letters = [chr(ord("a") + k) for k in range(2 * n)]
    cols = list(letters[n:])
    for s in range(1, n + 1):
        if s not in keep:
            cols[s - 1] = letters[s - 1]
    rows_out = [letters[s - 1] for s in keep]
    cols_out = [cols[s - 1] for s in keep]
    expr = "".join(letters[:n]) + "".join(cols) + "->" + "".join(rows_out + cols_out)
    red = np.einsum(expr, t)
    kdims = tuple(state.dims[s - 1] for s in keep)
    size = int(np.prod(kdims))
    return DensityMatrix(red.reshape(size, size), kdims)


def purity(state: DensityMatrix) -> float:
    m = state.matrix
    # tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.real(np.vdot(m.conj().T, m)))


def permute_subsystems(state: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems so that new subsystem k is old subsystem ``order[k-1]``.

    ``order`` is a permutation of the 1-based labels.
    """
    n = state.n
    order = [int(s) for s in order]
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{n}")
    axes = [s - 1 for s in order]
    t = state.matrix.reshape(state.dims + state.dims)
    t = t.transpose(axes + [n + a for a in axes])
    dims = tuple(state.dims[a] for a in axes)
    return DensityMatrix(t.reshape(state.size, state.size), dims)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    size = int(np.prod(dims))
    return DensityMatrix(np.eye(size) / size, tuple(dims))


def from_ket(psi, dims: Sequence[int]) -> DensityMatrix:
    """Rank-one projector onto the normalized vector ``psi``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()), tuple(dims))

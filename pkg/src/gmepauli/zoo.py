"""Named states, white-noise families, and transcribed comparison curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .states import DensityMatrix, from_ket

__all__ = [
    "basis_ket",
    "w3",
    "example2_phi",
    "ghz",
    "white_noise",
    "baselines",
    "baseline_roots",
    "FamilySpec",
    "FAMILIES",
    "family",
]


def basis_ket(dims: Sequence[int], digits: Sequence[int]) -> np.ndarray:
    """Computational basis vector ``|digits>``; the last subsystem varies fastest."""
    if len(dims) != len(digits):
        raise ValueError(f"{len(digits)} digits given for {len(dims)} subsystems")
    index = 0
    for d, a in zip(dims, digits):
        if not 0 <= a < d:
            raise ValueError(f"digit {a} out of range for dimension {d}")
        index = index * d + a
    v = np.zeros(math.prod(dims), dtype=complex)
    v[index] = 1
    return v


def _superpose(dims, *terms) -> DensityMatrix:
    psi = sum(basis_ket(dims, digits) for digits in terms)
    return from_ket(psi, dims)


def w3() -> DensityMatrix:
    """Three-qubit W state ``(|001> + |010> + |100>)/sqrt(3)``."""
    return _superpose((2, 2, 2), (0, 0, 1), (0, 1, 0), (1, 0, 0))


def example2_phi() -> DensityMatrix:
    """The qutrit-qutrit-qubit state ``[(|10>+|21>)|0> + (|00>+|11>+|22>)|1>]/sqrt(5)``."""
    dims = (3, 3, 2)
    return _superpose(dims, (1, 0, 0), (2, 1, 0), (0, 0, 1), (1, 1, 1), (2, 2, 1))


def ghz(n: int, d: int = 2) -> DensityMatrix:
    if n < 2:
        raise ValueError(f"GHZ state needs n >= 2, got {n}")
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    dims = (d,) * n
    return _superpose(dims, *[(a,) * n for a in range(d)])


def white_noise(base: DensityMatrix, x: float) -> DensityMatrix:
    """``x * base + (1 - x) * I / D``."""
    if not 0 <= x <= 1:
        raise ValueError(f"noise parameter must lie in [0, 1], got {x}")
    size = base.size
    return DensityMatrix(x * base.matrix + (1 - x) / size * np.eye(size), base.dims)


def baselines(x: float) -> tuple[float, float, float]:
    """Published comparison curves ``(g1, g2, g3)``.

    ``g1`` and ``g2`` are earlier genuine-entanglement tests for the noisy W
    family, ``g3`` an earlier one-versus-three separability test for the noisy
    four-qubit GHZ family. A positive value signals detection; only the zero
    crossings are meaningful, and they are used for plots only.
    """
    if not 0 <= x <= 1:
        raise ValueError(f"noise parameter must lie in [0, 1], got {x}")
    g1 = (math.sqrt(66) * x - 6) / 12
    g2 = 3.26 * x - (6 + math.sqrt(3)) / 3
    g3 = 9 * x**2 - 4
    return g1, g2, g3


def baseline_roots() -> tuple[float, float, float]:
    return 6 / math.sqrt(66), (6 + math.sqrt(3)) / 3 / 3.26, 2 / 3


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """White-noise family ``x -> x * base + (1 - x) * I / D`` for ``x`` in [0, 1]."""

    name: str
    base: DensityMatrix

    @property
    def dims(self) -> tuple[int, ...]:
        return self.base.dims

    def state_at(self, x: float) -> DensityMatrix:
        return white_noise(self.base, x)


FAMILIES: dict[str, Callable[[], DensityMatrix]] = {
    "w3_noise": w3,
    "example2_noise": example2_phi,
    "ghz4_noise": lambda: ghz(4),
}


def family(name: str, base: DensityMatrix | None = None) -> FamilySpec:
    """Look up a named family, or wrap ``base`` as ``custom``."""
    if name == "custom":
        if base is None:
            raise ValueError("the custom family needs a base state")
        return FamilySpec("custom", base)
    try:
        factory = FAMILIES[name]
    except KeyError:
        known = ", ".join(sorted(FAMILIES) + ["custom"])
        raise ValueError(f"unknown family {name!r}; expected one of {known}") from None
    return FamilySpec(name, factory())

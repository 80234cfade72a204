"""Seeded random states for property checks and the ``sample`` command."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .states import DensityMatrix, from_ket, mix, permute_subsystems, tensor

__all__ = ["random_pure", "random_mixed", "random_product_mixture", "random_biseparable"]


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_pure(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    size = math.prod(dims)
    return from_ket(_ginibre(rng, size, 1), tuple(dims))


def random_mixed(dims: Sequence[int], rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Induced-measure mixed state ``G G^dagger / tr`` with ``G`` of shape D x rank."""
    size = math.prod(dims)
    rank = size if rank is None else rank
    g = _ginibre(rng, size, rank)
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, tuple(dims))


def _random_state(dims, rng, pure_prob):
    if rng.random() < pure_prob:
        return random_pure(dims, rng)
    size = math.prod(dims)
    return random_mixed(dims, rng, rank=int(rng.integers(1, size + 1)))


def random_product_mixture(
    dims: Sequence[int],
    left: Sequence[int],
    rng: np.random.Generator,
    components: int | None = None,
    pure_prob: float = 0.5,
) -> DensityMatrix:
    """Random state separable across ``left | rest``, in the original subsystem order.

    ``left`` holds 1-based labels. Each component is ``rho_L (x) rho_R`` with
    each factor pure with probability ``pure_prob`` and mixed otherwise.
    """
    n = len(dims)
    left = sorted(int(s) for s in left)
    right = [s for s in range(1, n + 1) if s not in left]
    if not left or not right:
        raise ValueError("both sides of the split must be nonempty")
    components = int(rng.integers(1, 5)) if components is None else components
    weights = rng.dirichlet(np.ones(components)) if components > 1 else np.ones(1)
    dims_l = [dims[s - 1] for s in left]
    dims_r = [dims[s - 1] for s in right]
    parts = [
        (w, tensor(_random_state(dims_l, rng, pure_prob), _random_state(dims_r, rng, pure_prob)))
        for w in weights
    ]
    parts = [(w / weights.sum(), s) for w, s in parts]
    product = mix(parts) if components > 1 else parts[0][1]
    joined = left + right
    order = [joined.index(k) + 1 for k in range(1, n + 1)]
    return permute_subsystems(product, order)


def random_biseparable(
    dims: Sequence[int],
    rng: np.random.Generator,
    splits: Sequence[Sequence[int]],
    components: int | None = None,
) -> DensityMatrix:
    """Convex mixture of states each separable across one of ``splits``."""
    components = int(rng.integers(1, 5)) if components is None else components
    weights = rng.dirichlet(np.ones(components)) if components > 1 else np.ones(1)
    parts = []
    for w in weights:
        left = splits[int(rng.integers(len(splits)))]
        parts.append((w, random_product_mixture(dims, left, rng, components=1)))
    if components == 1:
        return parts[0][1]
    return mix([(w / weights.sum(), s) for w, s in parts])

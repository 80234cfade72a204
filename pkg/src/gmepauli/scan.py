"""Detection thresholds along one-parameter state families."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .correlation import corr_tensor
from .criteria import (
    Bipartition,
    bound_M,
    check_permutation_invariant,
    n_matrix,
    score_T,
    threshold_J,
    threshold_K,
    trace_norm,
)
from .states import DensityMatrix
from .zoo import baselines

__all__ = [
    "CriterionKind",
    "Criterion",
    "ScanResult",
    "evaluate",
    "scan",
    "emit_curve",
]

DEFAULT_GRID = 101


class Family(Protocol):
    name: str

    @property
    def dims(self) -> tuple[int, ...]: ...

    def state_at(self, x: float) -> DensityMatrix: ...


class CriterionKind(str, enum.Enum):
    BIPARTITION = "bipartition"
    GME_GENERAL = "gme"
    GME_PERM_INVARIANT = "gme-perm"


@dataclass(frozen=True)
class Criterion:
    kind: CriterionKind
    bipartition: Bipartition | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", CriterionKind(self.kind))
        if (self.kind is CriterionKind.BIPARTITION) != (self.bipartition is not None):
            raise ValueError("a bipartition is required exactly for the bipartition criterion")

    @classmethod
    def parse(cls, text: str, n: int) -> "Criterion":
        """Accepts ``gme``, ``gme-perm`` or a bipartition such as ``2|1,3``."""
        text = text.strip()
        if text in (CriterionKind.GME_GENERAL.value, "gme-general"):
            return cls(CriterionKind.GME_GENERAL)
        if text in (CriterionKind.GME_PERM_INVARIANT.value, "gme-perm-invariant"):
            return cls(CriterionKind.GME_PERM_INVARIANT)
        if text.startswith("bipartition:"):
            text = text.split(":", 1)[1]
        if "|" not in text:
            raise ValueError(f"unknown criterion {text!r}; use gme, gme-perm or a bipartition like 1|2,3")
        return cls(CriterionKind.BIPARTITION, Bipartition.parse(text, n))

    def __str__(self):
        if self.kind is CriterionKind.BIPARTITION:
            return f"bipartition {self.bipartition}"
        return self.kind.value


def criterion_bound(dims, alpha: float, beta: float, criterion: Criterion) -> float:
    if criterion.kind is CriterionKind.BIPARTITION:
        return bound_M(dims, criterion.bipartition, alpha, beta)
    if criterion.kind is CriterionKind.GME_GENERAL:
        return threshold_K(dims, alpha, beta)
    return threshold_J(dims, alpha, beta)


def evaluate(state: DensityMatrix, alpha: float, beta: float, criterion: Criterion) -> tuple[float, float]:
    """Return ``(score, bound)``; the criterion fires when ``score > bound``."""
    bound = criterion_bound(state.dims, alpha, beta, criterion)
    t = corr_tensor(state)
    if criterion.kind is CriterionKind.BIPARTITION:
        return trace_norm(n_matrix(t, criterion.bipartition, alpha, beta).matrix), bound
    if criterion.kind is CriterionKind.GME_PERM_INVARIANT:
        check_permutation_invariant(state)
    return score_T(t, alpha, beta), bound


@dataclass(frozen=True)
class ScanResult:
    family: str
    alpha: float
    beta: float
    criterion: Criterion
    threshold_x: float | None
    samples: tuple[tuple[float, float, float], ...]
    monotone: bool = True
    crossings: tuple[float, ...] = ()

    @property
    def bound(self) -> float:
        return self.samples[0][2]


def _bisect(gap, lo: float, hi: float, tol: float) -> float:
    # invariant: gap(lo) <= 0 < gap(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def scan(
    family: Family,
    alpha: float,
    beta: float,
    criterion: Criterion,
    tol: float = 1e-6,
    grid: int = DEFAULT_GRID,
) -> ScanResult:
    """Locate the noise level above which ``criterion`` certifies entanglement.

    The gap ``score(x) - bound`` is sampled on a uniform grid over [0, 1]. If the
    samples are nondecreasing, one bisection on [0, 1] finds the crossing.
    Otherwise every sign change on the grid is refined separately and the
    reported threshold is the last upward crossing, provided the criterion
    fires at ``x = 1``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if grid < 2:
        raise ValueError(f"grid needs at least two points, got {grid}")

    def point(x):
        return evaluate(family.state_at(x), alpha, beta, criterion)

    def gap(x):
        s, b = point(x)
        return s - b

    xs = np.linspace(0.0, 1.0, grid)
    samples = tuple((float(x), *point(float(x))) for x in xs)
    gaps = np.array([s - b for _, s, b in samples])
    scale = max(1.0, float(np.max(np.abs(gaps))))
    monotone = bool(np.all(np.diff(gaps) >= -1e-12 * scale))

    if monotone:
        if gaps[-1] <= 0:
            threshold, crossings = None, ()
        elif gaps[0] > 0:
            threshold, crossings = 0.0, ()
        else:
            threshold = _bisect(gap, 0.0, 1.0, tol)
            crossings = (threshold,)
    else:
        found = []
        upward = None
        for k in range(grid - 1):
            g0, g1 = gaps[k], gaps[k + 1]
            if (g0 <= 0) != (g1 <= 0):
                if g0 <= 0:
                    x = _bisect(gap, xs[k], xs[k + 1], tol)
                    upward = x
                else:
                    x = _bisect(lambda y: -gap(y), xs[k], xs[k + 1], tol)
                found.append(x)
        crossings = tuple(found)
        if gaps[-1] <= 0:
            threshold = None
        else:
            threshold = upward if upward is not None else 0.0
    return ScanResult(
        family=family.name,
        alpha=float(alpha),
        beta=float(beta),
        criterion=criterion,
        threshold_x=threshold,
        samples=samples,
        monotone=monotone,
        crossings=crossings,
    )


def emit_curve(
    family: Family,
    alpha: float,
    beta: float,
    criterion: Criterion,
    grid: int = DEFAULT_GRID,
) -> list[dict[str, float]]:
    """Rows of ``x``, score, bound, ``gap = score - bound`` and matching baselines."""
    if grid < 2:
        raise ValueError(f"grid needs at least two points, got {grid}")
    rows = []
    for x in np.linspace(0.0, 1.0, grid):
        x = float(x)
        score, bound = evaluate(family.state_at(x), alpha, beta, criterion)
        row = {"x": x, "score": score, "bound": bound, "gap": score - bound}
        g1, g2, g3 = baselines(x)
        if family.name == "w3_noise":
            row.update(g1=g1, g2=g2)
        elif family.name == "ghz4_noise":
            row.update(g3=g3)
        rows.append(row)
    return rows

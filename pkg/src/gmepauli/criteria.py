"""Trace-norm criteria for bipartite separability and genuine multipartite entanglement.

For a bipartition ``L|R`` of the subsystems the criterion matrix is

    N^{L|R} = alpha * [S^{L|r1}  0] + beta * S^{L|R}

where ``S^{A|B}`` flattens the correlation block of ``A u B`` into rows
indexed by ``A``'s multi-index and columns by ``B``'s (last label fastest in
both), ``r1 = min(R)``, and the zero block pads ``S^{L|r1}`` on the right to
the width of ``S^{L|R}``. Any state separable across ``L|R`` satisfies
``||N^{L|R}||_tr <= bound_M``. Averaging the norms over all bipartitions with
``|L| <= n//2`` gives the score ``T(rho)``; exceeding the largest bound
(or, for permutation-invariant states, the averaged bound) certifies genuine
multipartite entanglement.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .correlation import CorrelationTensor, bound_single, corr_tensor, subset_block, subset_bound
from .states import DensityMatrix, permute_subsystems

__all__ = [
    "Bipartition",
    "NMatrix",
    "Mode",
    "Verdict",
    "BipartitionRecord",
    "CriterionReport",
    "PreconditionError",
    "bipartitions",
    "s_matrix",
    "n_matrix",
    "trace_norm",
    "bound_M",
    "score_T",
    "threshold_K",
    "threshold_J",
    "check_permutation_invariant",
    "detect",
]

PERMUTATION_TOL = 1e-9
SINGULAR_CUTOFF = 1e-12


class PreconditionError(ValueError):
    """A state does not meet the requirements of the requested criterion."""


class Mode(str, enum.Enum):
    GENERAL = "general"
    PERMUTATION_INVARIANT = "perm-invariant"


class Verdict(str, enum.Enum):
    GME = "GME-certified"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Bipartition:
    left: tuple[int, ...]
    right: tuple[int, ...]
    n: int

    def __post_init__(self):
        left = tuple(sorted(int(s) for s in self.left))
        right = tuple(sorted(int(s) for s in self.right))
        n = int(self.n)
        if not left:
            raise ValueError("left side of a bipartition must be nonempty")
        if sorted(left + right) != list(range(1, n + 1)):
            raise ValueError(f"{left}|{right} does not split the labels 1..{n}")
        if len(left) > n // 2:
            raise ValueError(f"left side {left} has more than n//2 = {n // 2} subsystems")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_left(cls, left: Iterable[int], n: int) -> "Bipartition":
        left = tuple(sorted(left))
        return cls(left, tuple(s for s in range(1, n + 1) if s not in left), n)

    @classmethod
    def parse(cls, text: str, n: int) -> "Bipartition":
        """Parse ``"1,3|2,4"``; the right side may be omitted (``"1,3|"`` or ``"1,3"``)."""
        lhs, _, rhs = text.partition("|")
        try:
            left = tuple(int(s) for s in lhs.split(",") if s.strip())
            right = tuple(int(s) for s in rhs.split(",") if s.strip())
        except ValueError as exc:
            raise ValueError(f"cannot parse bipartition {text!r}") from exc
        if not right:
            return cls.from_left(left, n)
        return cls(left, right, n)

    def __str__(self):
        return "".join(map(str, self.left)) + "|" + "".join(map(str, self.right))


def bipartitions(n: int) -> list[Bipartition]:
    """All bipartitions with ``1 <= |L| <= n//2``, by size then lexicographically."""
    return [
        Bipartition.from_left(left, n)
        for k in range(1, n // 2 + 1)
        for left in itertools.combinations(range(1, n + 1), k)
    ]


def s_matrix(t: CorrelationTensor, left: Sequence[int], right: Sequence[int]) -> np.ndarray:
    """Flatten the correlation block of ``left u right`` into a left-by-right matrix."""
    left = tuple(int(s) for s in left)
    right = tuple(int(s) for s in right)
    if set(left) & set(right):
        raise ValueError(f"subsets {left} and {right} overlap")
    if not left or not right:
        raise ValueError("both subsets must be nonempty")
    if list(left) != sorted(left) or list(right) != sorted(right):
        raise ValueError("subsets must be given in ascending order")
    labels = tuple(sorted(left + right))
    block = subset_block(t, labels)
    axes = [labels.index(s) for s in left + right]
    block = block.transpose(axes)
    rows = math.prod(t.dims[s - 1] ** 2 - 1 for s in left)
    return block.reshape(rows, -1)


@dataclass(frozen=True, eq=False)
class NMatrix:
    bipartition: Bipartition
    alpha: float
    beta: float
    matrix: np.ndarray


def n_matrix(t: CorrelationTensor, bp: Bipartition, alpha: float, beta: float) -> NMatrix:
    if bp.n != t.n:
        raise ValueError(f"bipartition {bp} is for {bp.n} parties, tensor has {t.n}")
    full = s_matrix(t, bp.left, bp.right)
    head = s_matrix(t, bp.left, bp.right[:1])
    mat = beta * full
    mat[:, : head.shape[1]] += alpha * head
    mat.setflags(write=False)
    return NMatrix(bp, float(alpha), float(beta), mat)


def trace_norm(m) -> float:
    """Sum of singular values; values below ``1e-12 * max`` are dropped."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0:
        return 0.0
    return float(sv[sv >= SINGULAR_CUTOFF * sv[0]].sum())


def _side_factor(dims: Sequence[int]) -> float:
    return math.sqrt(subset_bound(dims))


def bound_M(dims: Sequence[int], bp: Bipartition, alpha: float, beta: float) -> float:
    """Largest ``||N^{L|R}||_tr`` attainable by a state separable across ``bp``."""
    dims = tuple(dims)
    if bp.n != len(dims):
        raise ValueError(f"bipartition {bp} is for {bp.n} parties, dims has {len(dims)}")
    left = _side_factor([dims[s - 1] for s in bp.left])
    right = _side_factor([dims[s - 1] for s in bp.right])
    head = math.sqrt(bound_single(dims[bp.right[0] - 1]))
    return left * (abs(alpha) * head + abs(beta) * right)


def _require_multipartite(n: int):
    if n < 3:
        raise ValueError(f"genuine multipartite criteria need n >= 3 subsystems, got {n}")


def score_T(t: CorrelationTensor, alpha: float, beta: float) -> float:
    _require_multipartite(t.n)
    norms = [trace_norm(n_matrix(t, bp, alpha, beta).matrix) for bp in bipartitions(t.n)]
    return float(np.mean(norms))


def threshold_K(dims: Sequence[int], alpha: float, beta: float) -> float:
    _require_multipartite(len(dims))
    return max(bound_M(dims, bp, alpha, beta) for bp in bipartitions(len(dims)))


def threshold_J(dims: Sequence[int], alpha: float, beta: float) -> float:
    _require_multipartite(len(dims))
    return float(np.mean([bound_M(dims, bp, alpha, beta) for bp in bipartitions(len(dims))]))


def check_permutation_invariant(state: DensityMatrix, tol: float = PERMUTATION_TOL):
    """Raise :class:`PreconditionError` unless ``state`` is symmetric under every
    permutation of its subsystems.

    Adjacent transpositions generate the symmetric group, so only those are
    tested.
    """
    if len(set(state.dims)) != 1:
        raise PreconditionError(
            f"permutation invariance needs equal subsystem dimensions, got {state.dims}"
        )
    n = state.n
    for k in range(1, n):
        order = list(range(1, n + 1))
        order[k - 1], order[k] = order[k], order[k - 1]
        swapped = permute_subsystems(state, order)
        dev = float(np.max(np.abs(swapped.matrix - state.matrix)))
        if dev > tol:
            raise PreconditionError(
                f"state is not invariant under swapping subsystems {k} and {k + 1} "
                f"(max deviation {dev:.3g})"
            )


@dataclass(frozen=True)
class BipartitionRecord:
    bipartition: Bipartition
    trace_norm: float
    bound: float

    @property
    def violated(self) -> bool:
        return self.trace_norm > self.bound


@dataclass(frozen=True)
class CriterionReport:
    dims: tuple[int, ...]
    alpha: float
    beta: float
    mode: Mode
    records: tuple[BipartitionRecord, ...]
    score: float
    threshold: float
    verdict: Verdict = field(init=False)

    def __post_init__(self):
        verdict = Verdict.GME if self.score > self.threshold else Verdict.INCONCLUSIVE
        object.__setattr__(self, "verdict", verdict)

    @property
    def entangled_across(self) -> list[Bipartition]:
        return [r.bipartition for r in self.records if r.violated]

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "alpha": self.alpha,
            "beta": self.beta,
            "mode": self.mode.value,
            "bipartitions": [
                {
                    "bipartition": str(r.bipartition),
                    "left": list(r.bipartition.left),
                    "right": list(r.bipartition.right),
                    "trace_norm": r.trace_norm,
                    "bound": r.bound,
                    "violated": r.violated,
                }
                for r in self.records
            ],
            "score": self.score,
            "threshold": self.threshold,
            "threshold_kind": "K" if self.mode is Mode.GENERAL else "J",
            "verdict": self.verdict.value,
        }


def detect(
    state: DensityMatrix,
    alpha: float,
    beta: float,
    mode: Mode | str = Mode.GENERAL,
) -> CriterionReport:
    mode = Mode(mode)
    _require_multipartite(state.n)
    if mode is Mode.PERMUTATION_INVARIANT:
        check_permutation_invariant(state)
    t = corr_tensor(state)
    records = tuple(
        BipartitionRecord(
            bp,
            trace_norm(n_matrix(t, bp, alpha, beta).matrix),
            bound_M(state.dims, bp, alpha, beta),
        )
        for bp in bipartitions(state.n)
    )
    score = float(np.mean([r.trace_norm for r in records]))
    if mode is Mode.GENERAL:
        threshold = threshold_K(state.dims, alpha, beta)
    else:
        threshold = threshold_J(state.dims, alpha, beta)
    return CriterionReport(
        dims=state.dims,
        alpha=float(alpha),
        beta=float(beta),
        mode=mode,
        records=records,
        score=score,
        threshold=threshold,
    )

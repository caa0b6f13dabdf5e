"""The k-batch greedy strategy under general and uniform matroid constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from .errors import DivisibilityError, PreconditionError, check_budget
from .objectives import SetFunction
from .setsystem import Matroid, Subset, UniformMatroid

RANK_REACHED = "rank_reached"
NO_POSITIVE_GAIN = "no_positive_gain"
NO_FEASIBLE_BATCH = "no_feasible_batch"


@dataclass
class GreedyTrace:
    """Auditable record of one greedy run.

    ``prefix_values[i]`` is ``f(S^i)`` with ``S^0`` empty, and ``gains[i-1]``
    is the gain of batch ``i`` over ``S^{i-1}``.
    """

    k: int
    batches: list[Subset] = field(default_factory=list)
    prefix_values: list[float] = field(default_factory=lambda: [0.0])
    gains: list[float] = field(default_factory=list)
    stop_reason: Optional[str] = None
    partial: bool = False

    @property
    def steps(self) -> int:
        return len(self.batches)

    @property
    def solution(self) -> Subset:
        out = Subset()
        for b in self.batches:
            out = out | b
        return out

    @property
    def value(self) -> float:
        return self.prefix_values[-1]

    def prefixes(self) -> list[Subset]:
        out = [Subset()]
        for b in self.batches:
            out.append(out[-1] | b)
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "batches": [list(b.members) for b in self.batches],
            "prefix_values": list(self.prefix_values),
            "gains": list(self.gains),
            "stop_reason": self.stop_reason,
            "partial": self.partial,
            "value": self.value,
        }


def _best_batch(f, matroid, current: int, size: int, budget):
    """Feasible batch maximizing f(current | J); ties go to the first in lex order."""
    n = f.ground.size
    rest = [j for j in range(n) if not current >> j & 1]
    if size > len(rest):
        return None, None
    check_budget(comb(len(rest), size), budget)
    best_mask = best_val = None
    for combo in combinations(rest, size):
        mask = 0
        for j in combo:
            mask |= 1 << j
        if matroid is not None and not matroid._independent(current | mask):
            continue
        val = f.value(current | mask)
        if best_val is None or val > best_val:
            best_mask, best_val = mask, val
    return best_mask, best_val


def _check_k(k, rank, allow_partial):
    if k < 1:
        raise PreconditionError(f"batch size k must be >= 1, got {k}")
    if rank % k and not allow_partial:
        raise DivisibilityError(
            f"k = {k} does not divide the rank {rank}; pass allow_partial=True to run anyway"
        )


def greedy_general(
    f: SetFunction, m: Matroid, k: int, allow_partial: bool = False, budget=None
) -> GreedyTrace:
    """k-batch greedy for a general matroid.

    Stops at the rank, when the best feasible batch has non-positive gain
    (that batch is not added), or when no feasible batch exists.
    """
    if m.ground.size != f.ground.size:
        raise PreconditionError("objective and matroid live on different ground sets")
    rank = m.rank_upper()
    _check_k(k, rank, allow_partial)
    trace = GreedyTrace(k=k, partial=rank % k != 0)
    current = 0
    while True:
        size = current.bit_count()
        if size >= rank:
            trace.stop_reason = RANK_REACHED
            break
        mask, val = _best_batch(f, m, current, min(k, rank - size), budget)
        if mask is None:
            trace.stop_reason = NO_FEASIBLE_BATCH
            break
        g = val - trace.prefix_values[-1]
        if g <= 0:
            trace.stop_reason = NO_POSITIVE_GAIN
            break
        current |= mask
        trace.batches.append(Subset(mask))
        trace.gains.append(g)
        trace.prefix_values.append(val)
    return trace


def greedy_uniform(
    f: SetFunction, K: int, k: int, allow_partial: bool = False, budget=None
) -> GreedyTrace:
    """k-batch greedy for the uniform matroid of rank K.

    Always runs ceil(K / k) steps; the gain sign is not tested.
    """
    UniformMatroid(f.ground, K)  # validates 1 <= K <= N
    _check_k(k, K, allow_partial)
    trace = GreedyTrace(k=k, partial=K % k != 0)
    current = 0
    while current.bit_count() < K:
        mask, val = _best_batch(f, None, current, min(k, K - current.bit_count()), budget)
        current |= mask
        trace.batches.append(Subset(mask))
        trace.gains.append(val - trace.prefix_values[-1])
        trace.prefix_values.append(val)
    trace.stop_reason = RANK_REACHED
    return trace


def run_greedy(f: SetFunction, m: Matroid, k: int, allow_partial: bool = False, budget=None):
    """Dispatch to the uniform strategy for uniform matroids, else the general one."""
    if isinstance(m, UniformMatroid):
        return greedy_uniform(f, m.rank, k, allow_partial, budget)
    return greedy_general(f, m, k, allow_partial, budget)

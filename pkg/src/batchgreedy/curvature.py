"""Total curvature of set functions, batch curvature and sequence-relative variants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateInstanceError, PreconditionError, check_exhaustive
from .objectives import Certificate, SetFunction, TaskAssignment
from .setsystem import Subset, combination_masks


@dataclass(frozen=True)
class CurvatureReport:
    k: int
    alpha_k: float
    argmax_set: Optional[Subset]
    candidate_count: int
    method: str = "enumeration"
    certificate: Optional[Certificate] = None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha_k": self.alpha_k,
            "argmax_set": None if self.argmax_set is None else list(self.argmax_set.members),
            "candidate_count": self.candidate_count,
            "method": self.method,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


def batch_curvature(
    f: SetFunction, k: int, budget=None, certificate: Optional[Certificate] = None
) -> CurvatureReport:
    """Maximize ``1 - gain_J(X \\ J) / f(J)`` over k-sets J with ``f(J) > 0``.

    An empty candidate family gives ``alpha_k = 0``.  Ties in the maximum go to
    the lexicographically smallest J.
    """
    n = f.ground.size
    if not 1 <= k <= n:
        raise PreconditionError(f"k must lie in 1..{n}, got {k}")
    check_exhaustive(n)
    full = (1 << n) - 1
    masks = combination_masks(range(n), k, budget)
    fj = f.values(masks)
    positive = fj > 0
    if not positive.any():
        return CurvatureReport(k, 0.0, None, 0, "enumeration", certificate)
    masks, fj = masks[positive], fj[positive]
    rest = f.values(full ^ masks)
    curv = 1.0 - (f.value(full) - rest) / fj
    i = int(np.argmax(curv))
    return CurvatureReport(
        k, float(curv[i]), Subset(int(masks[i])), int(positive.sum()), "enumeration", certificate
    )


def total_curvature(f: SetFunction, budget=None, certificate=None) -> CurvatureReport:
    return batch_curvature(f, 1, budget, certificate)


def curvature_ratio(f: SetFunction, j: Subset) -> float:
    """Re-evaluate the defining expression at a single candidate set."""
    full = f.ground.full
    fj = f(j)
    return 1.0 - (f(full) - f(full - j)) / fj


def task_assignment_curvature_closed_form(p: Sequence[float], k: int, K_cutoff=None) -> float:
    """``1 - prod_{l=k+1}^{K_cutoff} (1 - p_l)`` for ascending single-task probabilities.

    With ``K_cutoff = N`` (the default) this equals the enumerated batch
    curvature of the one-subtask assignment objective.
    """
    p = np.asarray(p, dtype=float).ravel()
    n = len(p)
    if np.any(np.diff(p) < 0):
        raise PreconditionError("probabilities must be sorted in ascending order")
    if K_cutoff is None:
        K_cutoff = n
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    if not k < K_cutoff <= n:
        raise PreconditionError(f"need k < K_cutoff <= N, got k={k}, K_cutoff={K_cutoff}, N={n}")
    return float(1.0 - np.prod(1.0 - p[k:K_cutoff]))


def task_assignment_curvature(f: TaskAssignment, k: int, K_cutoff=None) -> CurvatureReport:
    """Closed-form batch curvature for a one-subtask assignment objective."""
    if f.n != 1:
        raise PreconditionError("the closed form covers a single subtask only")
    order = np.argsort(f.p[0], kind="stable")
    alpha = task_assignment_curvature_closed_form(f.p[0][order], k, K_cutoff)
    argmax = Subset.from_indices(sorted(int(j) for j in order[:k]))
    return CurvatureReport(k, alpha, argmax, 0, "closed_form")


def _check_batches(f, batches, equal_sizes=True):
    seen = 0
    sizes = {len(b) for b in batches}
    for b in batches:
        f.ground.check(b)
        if seen & b.mask:
            raise PreconditionError(f"batch {b!r} overlaps an earlier batch")
        seen |= b.mask
    if equal_sizes and len(sizes) > 1:
        raise PreconditionError(f"batches must share one size, got sizes {sorted(sizes)}")


def sequence_curvature_bar(f: SetFunction, batches: Sequence[Subset], T: Subset) -> float:
    """Worst relative drop of a batch's gain once T is added to its prefix.

    Only batches disjoint from T with positive gain over their prefix count;
    with none, the result is 0.
    """
    _check_batches(f, batches)
    f.ground.check(T)
    best = None
    prefix = 0
    for b in batches:
        g = f.value(prefix | b.mask) - f.value(prefix)
        if b.isdisjoint(T) and g > 0:
            with_t = prefix | T.mask
            g_t = f.value(with_t | b.mask) - f.value(with_t)
            r = (g - g_t) / g
            best = r if best is None else max(best, r)
        prefix |= b.mask
    return 0.0 if best is None else best


def sequence_curvature_hat(f: SetFunction, batches, optimal: Subset) -> float:
    """Curvature of the greedy prefixes measured against ``optimal``.

    ``batches`` may be a :class:`GreedyTrace` or a list of subsets.
    """
    batches = getattr(batches, "batches", batches)
    _check_batches(f, batches, equal_sizes=False)
    f.ground.check(optimal)
    if not batches:
        raise DegenerateInstanceError("no greedy prefixes to measure")
    f_opt = f.value(optimal.mask)
    best = None
    prefix = 0
    for b in batches:
        prefix |= b.mask
        base = f.value(prefix)
        if base <= 0:
            raise DegenerateInstanceError(f"prefix {Subset(prefix)!r} has value {base}")
        r = 1.0 - (f.value(optimal.mask | prefix) - f_opt) / base
        best = r if best is None else max(best, r)
    return best

"""Exhaustive optimum and inequality checkers for the batch-greedy guarantees."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bounds import (
    EXPONENTIAL,
    EXPONENTIAL_LIMIT,
    HARMONIC,
    CurvatureRangeWarning,
    exponential_bound,
    exponential_limit_bound,
    harmonic_bound,
    matroid_certified,
)
from .curvature import CurvatureReport, batch_curvature, sequence_curvature_bar, sequence_curvature_hat
from .errors import (
    DegenerateInstanceError,
    MatroidNotCertifiedError,
    PreconditionError,
    check_budget,
)
from .greedy import NO_FEASIBLE_BATCH, GreedyTrace, run_greedy
from .objectives import TOL, Certificate, SetFunction, certify_monotone_submodular
from .setsystem import (
    AxiomReport,
    ExplicitMatroid,
    Matroid,
    Subset,
    UniformMatroid,
    all_masks,
    check_matroid_axioms,
)


@dataclass(frozen=True)
class OptimalCertificate:
    optimum: Subset
    value: float
    explored: int

    def to_dict(self):
        return {"optimum": list(self.optimum.members), "value": self.value, "explored": self.explored}


def brute_force_optimum(f: SetFunction, m: Matroid, budget=None) -> OptimalCertificate:
    """Exact maximizer over all independent sets; ties go to the lexicographically smallest."""
    if f.ground.size != m.ground.size:
        raise PreconditionError("objective and matroid live on different ground sets")
    masks = all_masks(m.ground.size)
    feasible = masks[m.independent_masks(masks)]
    check_budget(len(feasible), budget, "feasible sets")
    vals = f.values(feasible)
    best = vals.max()
    ties = [Subset(int(x)) for x in feasible[vals == best]]
    opt = min(ties, key=Subset.sort_key)
    return OptimalCertificate(opt, float(best), len(feasible))


@dataclass
class InequalityCheck:
    """One oriented inequality ``lhs <= rhs`` or ``lhs >= rhs``.

    ``slack`` is signed so that a negative value is a violation; ``holds``
    tolerates violations up to ``tol``.
    """

    name: str
    lhs: float
    rhs: float
    orientation: str
    holds: bool
    slack: float
    applicable: bool = True
    context: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.applicable and not self.holds

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "orientation": self.orientation,
            "holds": self.holds,
            "slack": self.slack,
            "applicable": self.applicable,
            "context": self.context,
        }


def make_check(name, lhs, rhs, orientation="<=", tol=TOL, applicable=True, **context):
    slack = rhs - lhs if orientation == "<=" else lhs - rhs
    return InequalityCheck(
        name, float(lhs), float(rhs), orientation, bool(slack >= -tol), float(slack), applicable, context
    )


def _members(s):
    return list(s.members)


def _check_partition(f, blocks, target: Subset):
    seen = 0
    for b in blocks:
        f.ground.check(b)
        if not b:
            raise PreconditionError("partition blocks must be nonempty")
        if seen & b.mask:
            raise PreconditionError(f"partition block {b!r} overlaps another block")
        seen |= b.mask
    if seen != target.mask:
        raise PreconditionError(f"blocks do not partition {target!r}")


def check_proposition_1(
    f: SetFunction, S: Subset, T: Subset, partition: Sequence[Subset], tol=TOL
) -> InequalityCheck:
    """``f(T | S) <= f(S) + sum_i gain_{T_i}(S)`` for a partition of ``T \\ S``."""
    _check_partition(f, partition, T - S)
    fs = f.value(S.mask)
    rhs = fs + sum(f.value(S.mask | b.mask) - fs for b in partition)
    return make_check(
        "proposition_1",
        f.value((T | S).mask),
        rhs,
        "<=",
        tol,
        S=_members(S),
        T=_members(T),
        partition=[_members(b) for b in partition],
    )


def check_proposition_2(
    f: SetFunction, batches: Sequence[Subset], T: Subset, partition: Sequence[Subset], tol=TOL
) -> InequalityCheck:
    """Bound ``f(T)`` by the batch gains of an ordered set S and the gains of T's blocks.

    Batches are split by containment: inside ``S \\ T`` (scaled by the
    sequence curvature), inside ``T``, or straddling T's boundary.  Straddling
    batches enter neither sum and are listed in the context, since the
    inequality is only guaranteed when there are none.
    """
    alpha_bar = sequence_curvature_bar(f, batches, T)
    S = Subset()
    for b in batches:
        S = S | b
    _check_partition(f, partition, T - S)
    outside = inside = 0.0
    straddling = []
    prefix = 0
    for i, b in enumerate(batches):
        g = f.value(prefix | b.mask) - f.value(prefix)
        if b.isdisjoint(T):
            outside += g
        elif b.issubset(T):
            inside += g
        else:
            straddling.append(i)
        prefix |= b.mask
    fs = f.value(S.mask)
    block_sum = sum(f.value(S.mask | b.mask) - fs for b in partition)
    rhs = alpha_bar * outside + inside + block_sum
    return make_check(
        "proposition_2",
        f.value(T.mask),
        rhs,
        "<=",
        tol,
        batches=[_members(b) for b in batches],
        T=_members(T),
        partition=[_members(b) for b in partition],
        alpha_bar=alpha_bar,
        straddling=straddling,
    )


def _require_certified(m: Matroid, axioms: Optional[AxiomReport]):
    if isinstance(m, ExplicitMatroid):
        axioms = axioms if axioms is not None else check_matroid_axioms(m)
        if not axioms.ok:
            raise MatroidNotCertifiedError(f"explicit system fails the matroid axioms: {axioms}")


def pad_to_rank(m: Matroid, s: Subset) -> Subset:
    """Extend an independent set to a maximal one, adding smallest indices first."""
    cur = s.mask
    for j in range(m.ground.size):
        if not cur >> j & 1 and m._independent(cur | 1 << j):
            cur |= 1 << j
    return Subset(cur)


def order_optimal_lemma1(
    f: SetFunction,
    m: Matroid,
    trace: GreedyTrace,
    optimal: Subset,
    axioms: Optional[AxiomReport] = None,
    tol=TOL,
) -> list[Subset]:
    """Split ``optimal`` into blocks ``J'_1..J'_t`` matched to the greedy batches.

    Works backwards from the last batch.  Block i is the greedy batch itself
    when that batch lies in the still-unassigned part of ``optimal``;
    otherwise it is grown one element at a time from the unassigned part,
    taking the smallest index that keeps ``S^{i-1}`` plus the block
    independent.  Each block's gain over ``S^{i-1}`` is asserted to be at
    most the greedy batch's gain.
    """
    _require_certified(m, axioms)
    k, t = trace.k, trace.steps
    prefixes = trace.prefixes()
    if any(len(b) != k for b in trace.batches):
        raise PreconditionError("every greedy batch must have exactly k elements")
    if len(optimal) != t * k or len(prefixes[-1]) != t * k:
        raise PreconditionError(
            f"need |optimal| = |S^t| = t*k = {t * k}, got {len(optimal)} and {len(prefixes[-1])}"
        )
    blocks: list[Optional[Subset]] = [None] * t
    remaining = optimal.mask
    for i in range(t, 0, -1):
        prev = prefixes[i - 1].mask
        batch = trace.batches[i - 1]
        if batch.mask & ~remaining == 0:
            block = batch.mask
        else:
            cur, block = prev, 0
            for _ in range(k):
                for j in range(m.ground.size):
                    bit = 1 << j
                    if remaining & bit and not cur & bit and m._independent(cur | bit):
                        cur |= bit
                        block |= bit
                        break
                else:
                    raise MatroidNotCertifiedError(
                        f"augmentation failed extending {Subset(cur)!r} from {Subset(remaining)!r}"
                    )
        g_block = f.value(prev | block) - f.value(prev)
        g_batch = f.value(prev | batch.mask) - f.value(prev)
        if g_block > g_batch + tol:
            raise PreconditionError(
                f"trace is not step-optimal at step {i}: block gain {g_block} > batch gain {g_batch}"
            )
        blocks[i - 1] = Subset(block)
        remaining &= ~block
    return blocks


def lemma1_checks(
    f: SetFunction, m: Matroid, trace: GreedyTrace, optimal: Subset, blocks: Sequence[Subset], tol=TOL
) -> list[InequalityCheck]:
    """Partition, prefix-independence and blockwise-gain postconditions of the ordering."""
    prefixes = trace.prefixes()
    union, overlaps, dependent, same_when_inside = 0, 0, 0, 0
    worst = -math.inf
    remaining = optimal.mask
    for i in range(len(blocks), 0, -1):
        b = blocks[i - 1]
        batch = trace.batches[i - 1]
        if union & b.mask or len(b) != trace.k:
            overlaps += 1
        union |= b.mask
        prev = prefixes[i - 1].mask
        if not m._independent(prev | b.mask):
            dependent += 1
        if batch.mask & ~remaining == 0 and b != batch:
            same_when_inside += 1
        remaining &= ~b.mask
        gb = f.value(prev | b.mask) - f.value(prev)
        gj = f.value(prev | batch.mask) - f.value(prev)
        worst = max(worst, gb - gj)
    bad_partition = overlaps + (union != optimal.mask)
    return [
        make_check("lemma1_partition", bad_partition, 0, "<=", 0.5),
        make_check("lemma1_prefix_independent", dependent, 0, "<=", 0.5),
        make_check("lemma1_keeps_contained_batches", same_when_inside, 0, "<=", 0.5),
        make_check("lemma1_block_gain", worst if blocks else 0.0, 0.0, "<=", tol),
    ]


def _bound_check(name, greedy_value, factor, optimum_value, tol, applicable, ctx):
    return make_check(
        name, greedy_value, factor * optimum_value, ">=", tol, applicable, **dict(ctx, bound=factor)
    )


@dataclass
class Replication:
    k: int
    trace: Optional[GreedyTrace]
    optimum: OptimalCertificate
    curvature: CurvatureReport
    certificate: Certificate
    alpha_hat: Optional[float] = None
    checks: list[InequalityCheck] = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def violations(self) -> list[InequalityCheck]:
        return [c for c in self.checks if c.failed]


def replicate(
    f: SetFunction,
    m: Matroid,
    k: int,
    allow_partial=False,
    tol=TOL,
    budget=None,
    certificate: Optional[Certificate] = None,
    axioms: Optional[AxiomReport] = None,
    optimum: Optional[OptimalCertificate] = None,
) -> Replication:
    """Run greedy, brute force and curvature for one k and check every guarantee.

    Checks whose hypotheses fail are kept with ``applicable=False``.
    """
    cert = certificate if certificate is not None else certify_monotone_submodular(f, tol)
    if isinstance(m, ExplicitMatroid) and axioms is None:
        axioms = check_matroid_axioms(m, budget)
    opt = optimum if optimum is not None else brute_force_optimum(f, m, budget)
    curv = batch_curvature(f, k, budget, cert)
    K = m.rank_upper()
    divides = K % k == 0
    rep = Replication(k, None, opt, curv, cert)
    if not divides and not allow_partial:
        rep.skipped = f"k={k} does not divide K={K}"
        return rep

    trace = run_greedy(f, m, k, allow_partial=True, budget=budget)
    rep.trace = trace
    alpha = curv.alpha_k
    base_ok = cert.ok and divides
    ctx = {"k": k, "K": K, "alpha_k": alpha}
    rep.checks.append(
        make_check("optimum_dominates_greedy", opt.value, trace.value, ">=", 1e-12, k=k)
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CurvatureRangeWarning)
        general_ok = (
            base_ok and matroid_certified(m, axioms) and trace.stop_reason != NO_FEASIBLE_BATCH
        )
        rep.checks.append(
            _bound_check(HARMONIC, trace.value, harmonic_bound(alpha), opt.value, tol, general_ok, ctx)
        )
        if isinstance(m, UniformMatroid):
            t = max(1, -(-K // k))
            ctx_t = dict(ctx, t=t)
            rep.checks.append(
                _bound_check(EXPONENTIAL, trace.value, exponential_bound(alpha, t), opt.value, tol, base_ok, ctx_t)
            )
            rep.checks.append(
                _bound_check(EXPONENTIAL_LIMIT, trace.value, exponential_limit_bound(alpha), opt.value, tol, base_ok, ctx_t)
            )
            try:
                hat = sequence_curvature_hat(f, trace, opt.optimum)
            except DegenerateInstanceError:
                hat = None
            rep.alpha_hat = hat
            if hat is not None:
                # only guaranteed when the optimum avoids the greedy solution
                disjoint = trace.solution.isdisjoint(opt.optimum)
                rep.checks.append(
                    make_check("curvature_hat_dominated", hat, alpha, "<=", tol, base_ok and disjoint, k=k)
                )
                if hat > 0:
                    rep.checks.append(
                        _bound_check(
                            "exponential_hat",
                            trace.value,
                            exponential_bound(hat, t),
                            opt.value,
                            tol,
                            base_ok,
                            dict(ctx_t, alpha_hat=hat),
                        )
                    )
        if general_ok and trace.value > 0:
            padded = pad_to_rank(m, opt.optimum)
            if len(padded) == trace.steps * k == K:
                blocks = order_optimal_lemma1(f, m, trace, padded, axioms, tol)
                rep.checks.extend(lemma1_checks(f, m, trace, padded, blocks, tol))
    return rep


def replicate_theorem(f: SetFunction, m: Matroid, k: int, **kwargs) -> list[InequalityCheck]:
    return replicate(f, m, k, **kwargs).checks

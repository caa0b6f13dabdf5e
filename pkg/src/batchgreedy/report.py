"""Run reports for single instances and CSV sweeps over generated instances."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bounds import EXPONENTIAL, EXPONENTIAL_LIMIT, HARMONIC, bound_report
from .curvature import batch_curvature
from .errors import EnumerationLimitError
from .greedy import run_greedy
from .instances import MATROID_KINDS, Instance, SplitMix64, generate_instance
from .objectives import TOL, certify_monotone_submodular
from .setsystem import ExplicitMatroid, check_matroid_axioms
from .verify import Replication, brute_force_optimum, replicate

CSV_COLUMNS = (
    "seed", "n", "N", "K", "k", "alpha_k", "greedy_value", "optimal_value",
    "ratio", "bound_kind", "bound_value", "holds", "slack",
)
BOUND_CHECKS = (HARMONIC, EXPONENTIAL, EXPONENTIAL_LIMIT, "exponential_hat")


def run_instance(
    instance: Instance,
    ks: Sequence[int],
    allow_partial: bool = False,
    budget=None,
    tol: float = TOL,
    timings: bool = False,
) -> dict:
    """Greedy traces, curvature, bounds and guarantee checks for each k.

    The returned dict is deterministic unless ``timings`` is set.
    """
    f, m = instance.objective, instance.matroid
    clock = {}
    t0 = time.perf_counter()
    cert = certify_monotone_submodular(f, tol)
    axioms = check_matroid_axioms(m, budget) if isinstance(m, ExplicitMatroid) else None
    clock["certificates"] = time.perf_counter() - t0

    report = {
        "instance_digest": instance.digest(),
        "ground_size": instance.ground.size,
        "objective_kind": f.kind,
        "matroid_kind": m.kind,
        "rank": m.rank_upper(),
        "certificate": cert.to_dict(),
        "axioms": axioms.to_dict() if axioms is not None else "by construction",
        "allow_partial": allow_partial,
        "tolerance": tol,
    }
    t0 = time.perf_counter()
    try:
        opt = brute_force_optimum(f, m, budget)
        report["optimum"] = opt.to_dict()
    except EnumerationLimitError as e:
        opt = None
        report["optimum"] = {"skipped": str(e)}
    clock["brute_force"] = time.perf_counter() - t0

    runs = []
    for k in ks:
        t0 = time.perf_counter()
        runs.append(_run_k(f, m, k, allow_partial, budget, tol, cert, axioms, opt))
        clock[f"k={k}"] = time.perf_counter() - t0
    report["runs"] = runs

    checks = [c for r in runs for c in r.get("checks", []) if c["applicable"]]
    failed = [c for c in checks if not c["holds"]]
    report["verdict"] = {
        "applicable_checks": len(checks),
        "failed": len(failed),
        "all_hold": not failed,
    }
    if timings:
        report["timings"] = clock
    return report


def _run_k(f, m, k, allow_partial, budget, tol, cert, axioms, opt) -> dict:
    out: dict = {"k": k}
    if not 1 <= k <= f.ground.size:
        out["skipped"] = f"k={k} outside 1..N"
        return out
    try:
        curv = batch_curvature(f, k, budget, cert)
    except EnumerationLimitError as e:
        out["skipped"] = str(e)
        return out
    out["curvature"] = curv.to_dict()
    out["bounds"] = [b.to_dict() for b in bound_report(f, m, k, curv, cert, axioms)]
    if opt is None:
        divides = m.rank_upper() % k == 0
        if divides or allow_partial:
            try:
                out["trace"] = run_greedy(f, m, k, allow_partial, budget).to_dict()
            except EnumerationLimitError as e:
                out["trace"] = {"skipped": str(e)}
        out["checks_skipped"] = "no brute-force optimum"
        return out
    try:
        rep = replicate(f, m, k, allow_partial, tol, budget, cert, axioms, opt)
    except EnumerationLimitError as e:
        out["skipped"] = str(e)
        return out
    if rep.skipped:
        out["skipped"] = rep.skipped
        return out
    out["trace"] = rep.trace.to_dict()
    out["alpha_hat"] = rep.alpha_hat
    out["checks"] = [c.to_dict() for c in rep.checks]
    return out


@dataclass
class SweepResult:
    seed: int
    n: int
    N: int
    K: int
    kind: str
    total_alpha: float
    certified: bool
    alphas: dict = field(default_factory=dict)
    replications: dict = field(default_factory=dict)

    def rows(self) -> Iterable[dict]:
        for k in sorted(self.replications):
            rep: Replication = self.replications[k]
            if rep.trace is None:
                continue
            g, o = rep.trace.value, rep.optimum.value
            for c in rep.checks:
                if c.name not in BOUND_CHECKS:
                    continue
                yield {
                    "seed": self.seed,
                    "n": self.n,
                    "N": self.N,
                    "K": self.K,
                    "k": k,
                    "alpha_k": rep.curvature.alpha_k,
                    "greedy_value": g,
                    "optimal_value": o,
                    "ratio": g / o if o > 0 else 1.0,
                    "bound_kind": c.name,
                    "bound_value": c.context["bound"],
                    "holds": ("true" if c.holds else "false") if c.applicable else "na",
                    "slack": c.slack,
                }

    def monotonicity_violations(self, tol=TOL, divisors_only=True) -> list[tuple[int, int]]:
        """Pairs (k1, k) with k1 < k where alpha_k exceeds alpha_k1."""
        bad = []
        for k in self.alphas:
            for k1 in self.alphas:
                if k1 >= k or (divisors_only and k % k1):
                    continue
                if self.alphas[k] > self.alphas[k1] + tol:
                    bad.append((k1, k))
        return bad


def sweep(
    seed: int,
    count: int,
    n_range=(1, 3),
    N_range=(3, 8),
    ks=(1, 2, 3, 4),
    kinds=MATROID_KINDS,
    allow_partial: bool = True,
    budget=None,
    tol: float = TOL,
) -> list[SweepResult]:
    """Generate ``count`` instances from ``seed`` and replicate every guarantee.

    The sweep stream draws, per instance: the instance seed (63 bits), n, N,
    K in 1..N and the matroid kind.
    """
    rng = SplitMix64(seed)
    results = []
    for _ in range(count):
        inst_seed = rng.next_u64() >> 1
        n = rng.randint(*n_range)
        N = rng.randint(*N_range)
        K = rng.randint(1, N)
        kind = kinds[rng.randint(0, len(kinds) - 1)]
        inst = generate_instance(inst_seed, n, N, K, kind)
        results.append(run_sweep_instance(inst, inst_seed, n, kind, ks, allow_partial, budget, tol))
    results.sort(key=lambda r: r.seed)
    return results


def run_sweep_instance(inst, seed, n, kind, ks, allow_partial=True, budget=None, tol=TOL) -> SweepResult:
    f, m = inst.objective, inst.matroid
    cert = certify_monotone_submodular(f, tol)
    axioms = check_matroid_axioms(m, budget) if isinstance(m, ExplicitMatroid) else None
    opt = brute_force_optimum(f, m, budget)
    res = SweepResult(
        seed, n, f.ground.size, m.rank_upper(), kind,
        batch_curvature(f, 1, budget).alpha_k, cert.ok,
    )
    for k in ks:
        if k > f.ground.size:
            continue
        rep = replicate(f, m, k, allow_partial, tol, budget, cert, axioms, opt)
        res.alphas[k] = rep.curvature.alpha_k
        res.replications[k] = rep
    return res


def format_float(x: float) -> str:
    return format(x, ".12g")


def write_csv(results: Sequence[SweepResult], stream=None) -> str:
    """CSV rows sorted by (seed, k); floats with 12 significant digits."""
    buf = io.StringIO() if stream is None else stream
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    rows = [r for res in results for r in res.rows()]
    rows.sort(key=lambda r: (r["seed"], r["k"]))
    for r in rows:
        w.writerow(format_float(r[c]) if isinstance(r[c], float) else r[c] for c in CSV_COLUMNS)
    return buf.getvalue() if stream is None else ""


def summarize(results: Sequence[SweepResult], tol: float = TOL) -> dict:
    checks = [c for r in results for rep in r.replications.values() for c in rep.checks if c.applicable]
    return {
        "instances": len(results),
        "applicable_checks": len(checks),
        "violations": sum(not c.holds for c in checks),
        "curvature_above_total": sum(
            a > r.total_alpha + tol for r in results if r.certified for a in r.alphas.values()
        ),
        "divisor_monotonicity_violations": sum(
            len(r.monotonicity_violations(tol, True)) for r in results if r.certified
        ),
        "nondivisor_monotonicity_violations": sum(
            len(r.monotonicity_violations(tol, False)) - len(r.monotonicity_violations(tol, True))
            for r in results
            if r.certified
        ),
    }

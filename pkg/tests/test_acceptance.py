"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed in the "acceptance criteria" section of the pytest
terminal summary.
"""

import math
import time

import numpy as np
import pytest

from batchgreedy import (
    Subset,
    TaskAssignment,
    batch_curvature,
    check_proposition_1,
    check_proposition_2,
    exponential_bound,
    exponential_limit_bound,
    greedy_general,
    harmonic_bound,
    order_optimal_lemma1,
    task_assignment_curvature_closed_form,
)
from batchgreedy.cli import main
from batchgreedy.instances import generate_instance, save
from batchgreedy.report import summarize, sweep
from batchgreedy.verify import brute_force_optimum, lemma1_checks, pad_to_rank
from helpers import DESK_P, random_partition, random_subset, record_acceptance

TOL = 1e-9
SWEEP_SEED, SWEEP_COUNT = 2024, 200


@pytest.fixture(scope="module")
def swept():
    t0 = time.perf_counter()
    results = sweep(SWEEP_SEED, SWEEP_COUNT, n_range=(1, 3), N_range=(3, 8), ks=(1, 2, 3, 4))
    return results, time.perf_counter() - t0


def _checks(results, names, kinds=None):
    for r in results:
        if kinds and r.kind not in kinds:
            continue
        for k, rep in r.replications.items():
            for c in rep.checks:
                if c.name in names and c.applicable:
                    yield r, k, c


def test_1_closed_form_agreement():
    t0 = time.perf_counter()
    worst, compared = 0.0, 0
    for seed in range(100):
        N = 3 + seed % 8
        f = generate_instance(seed, 1, N, N).objective
        p = np.sort(f.p[0])
        for k in range(1, min(4, N - 1) + 1):
            closed = task_assignment_curvature_closed_form(p, k, N)
            worst = max(worst, abs(closed - batch_curvature(f, k).alpha_k))
            compared += 1
    desk = TaskAssignment(DESK_P)
    a1, a2 = batch_curvature(desk, 1).alpha_k, batch_curvature(desk, 2).alpha_k
    elapsed = time.perf_counter() - t0
    passed = worst <= TOL and abs(a1 - 0.9) <= TOL and abs(a2 - 0.8) <= TOL and elapsed < 5
    record_acceptance(
        1, "closed-form curvature matches enumeration", passed,
        f"({compared} pairs, max diff {worst:.2e}; desk a1={a1:.12g} a2={a2:.12g}; {elapsed:.2f}s)",
    )
    assert passed


def test_2_batch_curvature_below_total(swept):
    results, elapsed = swept
    s = summarize(results, TOL)
    certified = sum(r.certified for r in results)
    passed = s["curvature_above_total"] == 0 and certified == len(results) and elapsed < 60
    record_acceptance(
        2, "alpha_k <= alpha over the sweep", passed,
        f"({len(results)} instances, {s['curvature_above_total']} violations; sweep {elapsed:.1f}s)",
    )
    assert passed


def test_3_divisor_monotonicity(swept):
    results, _ = swept
    s = summarize(results, TOL)
    pairs = sum(
        1 for r in results for k in r.alphas for k1 in r.alphas if k1 < k and k % k1 == 0
    )
    passed = s["divisor_monotonicity_violations"] == 0 and pairs > 0
    record_acceptance(
        3, "alpha_k <= alpha_k1 for divisor pairs", passed,
        f"({pairs} pairs, {s['divisor_monotonicity_violations']} violations; "
        f"non-divisor pairs reported: {s['nondivisor_monotonicity_violations']} violations)",
    )
    assert passed


def test_4_harmonic_on_general_matroids(swept):
    results, _ = swept
    hits = list(_checks(results, {"harmonic"}, {"partition", "explicit"}))
    bad = [c for _, _, c in hits if not c.holds]
    passed = len(hits) > 0 and not bad
    record_acceptance(
        4, "harmonic bound on partition/explicit matroids", passed,
        f"({len(hits)} applicable checks, {len(bad)} violations)",
    )
    assert passed


def test_5_exponential_on_uniform(swept):
    results, _ = swept
    hits = list(_checks(results, {"exponential_finite_t", "exponential_limit"}, {"uniform"}))
    bad = [c for _, _, c in hits if not c.holds]
    names = {c.name for _, _, c in hits}
    passed = len(names) == 2 and not bad
    record_acceptance(
        5, "finite-t and limit exponential bounds on uniform matroids", passed,
        f"({len(hits)} applicable checks, {len(bad)} violations)",
    )
    assert passed


def test_6_classical_anchors():
    h, e = harmonic_bound(1), exponential_limit_bound(1)
    passed = abs(h - 0.5) <= TOL and abs(e - (1 - 1 / math.e)) <= TOL and round(e, 6) == 0.632121
    record_acceptance(6, "full-curvature anchors 1/2 and 1-1/e", passed, f"(harmonic {h:.12g}, limit {e:.12g})")
    assert passed


def test_7_bound_function_grid():
    alphas = np.arange(101) / 100
    h = np.array([harmonic_bound(a) for a in alphas])
    lim = np.array([exponential_limit_bound(a) for a in alphas])
    e = np.array([[exponential_bound(a, t) for a in alphas] for t in range(1, 51)])
    bad = 0
    bad += int(np.sum(np.diff(h) > TOL))
    bad += int(np.sum(np.diff(e, axis=1) > TOL))
    bad += int(np.sum(np.diff(e, axis=0) > TOL))
    bad += int(np.sum(e < lim - TOL))
    bad += int(np.sum(lim < h - TOL))
    passed = bad == 0
    record_acceptance(7, "bound monotonicity and ordering on the grid", passed, f"({e.size} grid points, {bad} violations)")
    assert passed


def test_8_propositions_and_lemma(swept):
    results, _ = swept
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    p1_bad = p2_bad = 0
    for _ in range(1000):
        N = int(rng.integers(3, 9))
        f = TaskAssignment(rng.uniform(0.05, 0.95, size=(int(rng.integers(1, 4)), N)))
        s, t = random_subset(rng, range(N)), random_subset(rng, range(N))
        p1_bad += not check_proposition_1(f, s, t, random_partition(rng, t - s)).holds
    for _ in range(1000):
        N = int(rng.integers(3, 9))
        f = TaskAssignment(rng.uniform(0.05, 0.95, size=(int(rng.integers(1, 4)), N)))
        k = int(rng.integers(1, 4))
        perm = rng.permutation(N)
        steps = int(rng.integers(1, N // k + 1))
        batches = [Subset.from_indices(perm[i * k : (i + 1) * k]) for i in range(steps)]
        # T is aligned with the batches: each batch lies inside T or outside it
        T = random_subset(rng, perm[steps * k :])
        for b in batches:
            if rng.random() < 0.5:
                T = T | b
        S = Subset.from_indices(perm[: steps * k])
        p2_bad += not check_proposition_2(f, batches, T, random_partition(rng, T - S)).holds

    # optimal ordering on every certified matroid instance of the sweep, for each k | K
    lemma_runs = lemma_bad = 0
    for r in results:
        for k, rep in r.replications.items():
            if r.K % k or rep.trace is None or len(rep.trace.solution) != r.K:
                continue
            inst = generate_instance(r.seed, r.n, r.N, r.K, r.kind)
            f, m = inst.objective, inst.matroid
            tr = greedy_general(f, m, k)
            opt = pad_to_rank(m, brute_force_optimum(f, m).optimum)
            blocks = order_optimal_lemma1(f, m, tr, opt)
            lemma_runs += 1
            lemma_bad += any(not c.holds for c in lemma1_checks(f, m, tr, opt, blocks))
    elapsed = time.perf_counter() - t0
    passed = p1_bad == 0 and p2_bad == 0 and lemma_runs > 0 and lemma_bad == 0 and elapsed < 60
    record_acceptance(
        8, "propositions 1-2 and the optimal-ordering lemma", passed,
        f"(prop1 1000 draws/{p1_bad} bad, prop2 1000 aligned draws/{p2_bad} bad, "
        f"lemma {lemma_runs} runs/{lemma_bad} bad; {elapsed:.1f}s)",
    )
    assert passed


def test_9_determinism(tmp_path):
    gen = []
    for name in ("a", "b"):
        path = tmp_path / f"gen_{name}.json"
        assert main(["gen", "--seed", "7", "--n", "2", "--N", "6", "--K", "4", "--matroid", "partition", "--out", str(path)]) == 0
        gen.append(path.read_bytes())
    inst = tmp_path / "inst.json"
    save(generate_instance(11, 2, 6, 4, "uniform"), inst)
    runs = []
    for name in ("a", "b"):
        path = tmp_path / f"run_{name}.json"
        code = main(["run", str(inst), "--k", "1,2,3,4", "--allow-partial-batch", "--out", str(path)])
        assert code == 0
        runs.append(path.read_bytes())
    passed = gen[0] == gen[1] and runs[0] == runs[1]
    record_acceptance(9, "byte-identical run reports and generated instances", passed, f"(run {len(runs[0])} bytes, gen {len(gen[0])} bytes)")
    assert passed

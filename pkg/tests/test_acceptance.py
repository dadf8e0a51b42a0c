"""Acceptance gate: nine end-to-end checks covering solver optimality,
transition/update arithmetic, the insertion experiment's qualitative behavior
on the two-blob preset and on iris, optimum monotonicity, the score combiner,
CLI reproducibility, and k-means properties.

Each test prints one `[acceptance] ...: PASS/FAIL` line (visible even under
captured output) and then asserts.
"""

import filecmp
import time

import numpy as np
import pytest

from antnet import (
    OPEN_PATH,
    AcoParams,
    ClassNetwork,
    KMeansConfig,
    PhaseSpec,
    RngSeed,
    TransitionContext,
    TourSolution,
    baseline_phase,
    brute_force_optimum,
    build_class_networks,
    combine_scores,
    farthest_other_class,
    gen_dataset,
    init_pheromone,
    insert_points,
    kmeans,
    load_preset,
    majority_vote_mapping,
    oracle_comparison,
    run_experiment,
    run_insertion_protocol,
    sample_class_members,
    transition_probabilities,
    update_pheromone,
)
from antnet.cli import EXACT_MATCH_TOL, _dataset_seed, main


@pytest.fixture
def announce(capsys):
    def _announce(name: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        with capsys.disabled():
            print(f"\n[acceptance] {name}: {status}{suffix}")

    return _announce


def test_criterion_1_solver_matches_brute_force(announce):
    """20 random instances at each n in 4..8, default params: >= 95% exact
    optima, never below the optimum, under 60 s."""
    t0 = time.perf_counter()
    rows = oracle_comparison(n_max=8, trials=20, seed=RngSeed(0))
    elapsed = time.perf_counter() - t0
    exact = sum(1 for r in rows if abs(r.gap) <= EXACT_MATCH_TOL)
    below = [r for r in rows if r.aco_length < r.optimum - EXACT_MATCH_TOL]
    ok = exact >= 0.95 * len(rows) and not below and elapsed < 60.0
    detail = f"{exact}/{len(rows)} exact, {len(below)} below optimum, {elapsed:.1f}s"
    announce("1 solver vs exhaustive optimum", ok, detail)
    assert exact >= 0.95 * len(rows), detail
    assert not below, detail
    assert elapsed < 60.0, detail


def test_criterion_2_transition_probabilities_normalize(announce):
    """10,000 randomized decision contexts: probabilities sum to 1 within
    1e-12, vanish on visited nodes, and alpha=beta=0 is uniform."""
    gen = np.random.default_rng(12345)
    worst_sum_err = 0.0
    worst_uniform_err = 0.0
    visited_ok = True
    for trial in range(10_000):
        n = int(gen.integers(2, 16))
        k = int(gen.integers(1, n))
        unvisited = tuple(int(j) for j in gen.choice(n, size=k, replace=False))
        current = int(gen.choice([i for i in range(n) if i not in unvisited]))
        ctx = TransitionContext(
            current, unvisited, gen.random(n) + 1e-9, gen.random(n) + 1e-9
        )
        params = AcoParams(alpha=float(gen.random() * 3), beta=float(gen.random() * 3))
        p = transition_probabilities(ctx, params)
        worst_sum_err = max(worst_sum_err, abs(float(p.sum()) - 1.0))
        visited = [i for i in range(n) if i not in unvisited]
        if visited and float(np.abs(p[visited]).max()) != 0.0:
            visited_ok = False
        if trial % 10 == 0:
            u = transition_probabilities(ctx, AcoParams(alpha=0.0, beta=0.0))
            worst_uniform_err = max(
                worst_uniform_err,
                float(np.abs(u[list(unvisited)] - 1.0 / k).max()),
            )
    ok = worst_sum_err <= 1e-12 and visited_ok and worst_uniform_err <= 1e-12
    detail = (
        f"max |sum-1| {worst_sum_err:.2e}, visited all zero: {visited_ok}, "
        f"max uniform dev {worst_uniform_err:.2e}"
    )
    announce("2 transition probability normalization", ok, detail)
    assert worst_sum_err <= 1e-12, detail
    assert visited_ok, detail
    assert worst_uniform_err <= 1e-12, detail


def test_criterion_3_pheromone_update_arithmetic(announce):
    """Hand-computed update values to 1e-12; rho=0 is a fixed point; symmetry
    and positivity survive 1000 random update sequences."""
    # rho = 0: fixed point
    tau = np.full((3, 3), 0.4)
    fixed = np.array_equal(
        update_pheromone(tau, TourSolution((0, 1, 2), 2.0), AcoParams(rho=0.0)), tau
    )
    # rho = 1, f(S) = 4: history erased, path edges get exactly 1/4
    full = update_pheromone(
        np.full((2, 2), 17.0), TourSolution((0, 1), 4.0), AcoParams(rho=1.0)
    )
    err_full = abs(full[0, 1] - 0.25)
    # rho = 0.5, tau = 2, f(S) = 4: 0.5*2 + 0.5*0.25 = 1.125
    half = update_pheromone(
        np.full((2, 2), 2.0), TourSolution((0, 1), 4.0), AcoParams(rho=0.5)
    )
    err_half = abs(half[0, 1] - 1.125)

    gen = np.random.default_rng(7)
    sym_pos_ok = True
    for _ in range(1000):
        n = int(gen.integers(2, 8))
        tau = init_pheromone(n, float(gen.random() + 0.05))
        params = AcoParams(rho=float(gen.random() * 0.9 + 0.05))
        for _ in range(int(gen.integers(1, 5))):
            order = tuple(int(i) for i in gen.permutation(n))
            tau = update_pheromone(
                tau, TourSolution(order, float(gen.random() * 9 + 0.1)), params
            )
        if not np.array_equal(tau, tau.T) or not np.all(tau > 0):
            sym_pos_ok = False
            break

    ok = fixed and err_full <= 1e-12 and err_half <= 1e-12 and sym_pos_ok
    detail = (
        f"rho=0 fixed: {fixed}, |0.25 err| {err_full:.1e}, "
        f"|1.125 err| {err_half:.1e}, symmetry/positivity: {sym_pos_ok}"
    )
    announce("3 pheromone update arithmetic", ok, detail)
    assert ok, detail


def test_criterion_4_two_blob_experiment_direction(announce):
    """Two-blob preset, default params, R=30: inserting points into the
    target class raises its phase 3-5 medians above baseline (phase 5
    highest) while the untouched class's medians stay inside its baseline
    whiskers. Under 5 minutes."""
    t0 = time.perf_counter()
    ds = gen_dataset(load_preset("dataset1"), _dataset_seed(0))
    report = run_experiment(
        ds, AcoParams(), repetitions=30, target_class=0, dataset_name="dataset1"
    )
    elapsed = time.perf_counter() - t0

    target = report.class_reports[0]
    other = report.class_reports[1]
    base = target[0]
    medians = [p.median for p in target]
    raised = all(m > base.median for m in medians[2:])
    phase5_largest = medians[4] == max(medians)
    other_base = other[0]
    preserved = all(
        other_base.whisker_low <= p.median <= other_base.whisker_high for p in other
    )
    ok = raised and phase5_largest and preserved and elapsed < 300.0
    detail = (
        f"target medians {[round(m, 2) for m in medians]}, other-class "
        f"preserved: {preserved}, {elapsed:.0f}s"
    )
    announce("4 two-blob insertion direction", ok, detail)
    assert raised, detail
    assert phase5_largest, detail
    assert preserved, detail
    assert elapsed < 300.0, detail


def test_criterion_5_iris_directional_sensitivity(announce, iris_zscored):
    """Per iris class, over 10 base seeds: 5 points from the farthest other
    class push the median above the baseline whisker_high, 5 same-class
    member points do not. At least 8/10 seeds must agree, per class."""
    ds = iris_zscored
    nets = build_class_networks(ds)
    per_class = []
    for t in range(ds.n_classes):
        donor = farthest_other_class(ds, t)
        passes = 0
        for s in range(10):
            params = AcoParams(n_iters=60, n_ants=12, seed=RngSeed(s).derive(80, t))
            same_pts = sample_class_members(ds, t, 5, RngSeed(1000 + s))
            diff_pts = sample_class_members(ds, donor, 5, RngSeed(1000 + s))
            base, same, diff = run_insertion_protocol(
                nets[t],
                [
                    baseline_phase(),
                    PhaseSpec(2, "same_class", same_pts),
                    PhaseSpec(5, "far_or_other_class", diff_pts),
                ],
                params,
                repetitions=15,
            )
            if diff.median > base.whisker_high and same.median <= base.whisker_high:
                passes += 1
        per_class.append(passes)
    ok = all(p >= 8 for p in per_class)
    detail = f"per-class passes {per_class} (need >= 8/10 each)"
    announce("5 iris directional sensitivity", ok, detail)
    assert ok, detail


def test_criterion_6_optimum_monotone_under_insertion(announce):
    """200 random instances (n <= 7): the brute-force optimal path length
    never decreases when one point is inserted. Exact inequality."""
    gen = np.random.default_rng(99)
    violations = 0
    for trial in range(200):
        n = int(gen.integers(2, 8))
        net = ClassNetwork.from_points(0, gen.random((n, 2)) * 10)
        before = brute_force_optimum(net, OPEN_PATH).length
        grown = insert_points(net, gen.random((1, 2)) * 10)
        after = brute_force_optimum(grown, OPEN_PATH).length
        if after < before:
            violations += 1
    ok = violations == 0
    detail = f"{violations}/200 violations"
    announce("6 optimum monotone under insertion", ok, detail)
    assert ok, detail


def test_criterion_7_score_combiner_affine(announce):
    """Endpoint identities are exact; affinity in lambda holds to 1e-15 by
    midpoint collinearity."""
    gen = np.random.default_rng(5)
    endpoint_ok = True
    worst = 0.0
    for _ in range(500):
        c, h = float(gen.random()), float(gen.random())
        if combine_scores(c, h, 0.0) != c or combine_scores(c, h, 1.0) != h:
            endpoint_ok = False
        lo, hi = sorted(float(x) for x in gen.random(2))
        mid = (lo + hi) / 2.0
        chord = (combine_scores(c, h, lo) + combine_scores(c, h, hi)) / 2.0
        worst = max(worst, abs(combine_scores(c, h, mid) - chord))
    ok = endpoint_ok and worst <= 1e-15
    detail = f"endpoints exact: {endpoint_ok}, max collinearity dev {worst:.2e}"
    announce("7 score combiner affine", ok, detail)
    assert endpoint_ok, detail
    assert worst <= 1e-15, detail


def test_criterion_8_cli_outputs_reproducible(announce, tmp_path):
    """Two `run` invocations with the same config and seed produce
    byte-identical JSON and CSV (and SVG)."""
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        code = main(
            [
                "run", "--dataset", "dataset1", "--seed", "7", "--reps", "3",
                "--iters", "30", "--out", str(out),
            ]
        )
        assert code == 0
        outs.append(out)
    files = ["report.json", "samples.csv", "boxplots.svg"]
    same = {
        f: filecmp.cmp(outs[0] / f, outs[1] / f, shallow=False) for f in files
    }
    ok = all(same.values())
    detail = ", ".join(f"{f}: {'identical' if v else 'DIFFERS'}" for f, v in same.items())
    announce("8 CLI reproducibility", ok, detail)
    assert ok, detail


def test_criterion_9_kmeans_properties(announce):
    """Inertia never increases across iterations (100 instances); k = n gives
    zero inertia; the two-blob preset is recovered exactly for 10/10 seeds."""
    gen = np.random.default_rng(2)
    monotone_ok = True
    for trial in range(100):
        pts = gen.random((int(gen.integers(10, 41)), 2)) * 10
        res = kmeans(pts, KMeansConfig(k=int(gen.integers(1, 5)), seed=RngSeed(trial)))
        hist = res.inertia_history
        if any(b > a + 1e-9 for a, b in zip(hist, hist[1:])):
            monotone_ok = False
            break

    pts = gen.random((8, 2))
    zero_inertia = kmeans(pts, KMeansConfig(k=8, seed=RngSeed(0))).inertia == 0.0

    recovered = 0
    specs = load_preset("dataset1")
    for s in range(10):
        ds = gen_dataset(specs, RngSeed(s))
        res = kmeans(ds.points, KMeansConfig(k=2, seed=RngSeed(s)))
        mapping = majority_vote_mapping(res.labels, ds.labels)
        mapped = np.array([mapping[int(c)] for c in res.labels])
        if np.array_equal(mapped, ds.labels):
            recovered += 1

    ok = monotone_ok and zero_inertia and recovered == 10
    detail = (
        f"inertia monotone: {monotone_ok}, k=n zero inertia: {zero_inertia}, "
        f"blob recovery {recovered}/10"
    )
    announce("9 k-means properties", ok, detail)
    assert monotone_ok, detail
    assert zero_inertia, detail
    assert recovered == 10, detail

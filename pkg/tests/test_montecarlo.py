import math

import pytest

from kneser_ekr.errors import ResourceError
from kneser_ekr.kneser import EdgeOracle, SearchLimits, has_near_star_violation, is_ekr, kneser_params
from kneser_ekr.montecarlo import (
    TrialPlan, estimate_pc, estimate_pr_ekr, format_trend, near_star_rate, near_star_threshold,
    pc_trend_report, wilson_interval,
)
from kneser_ekr.rng import sub_seed
from oracles import brute_force_ekr

P52 = kneser_params(5, 2)
P73 = kneser_params(7, 3)


@pytest.mark.parametrize("params", [P52, P73], ids=["5-2", "7-3"])
def test_endpoints_exact(params):
    assert estimate_pr_ekr(TrialPlan(params, 1.0, 200, 3)).fraction == 1.0
    assert estimate_pr_ekr(TrialPlan(params, 0.0, 200, 3)).fraction == 0.0


def test_determinism():
    a = estimate_pr_ekr(TrialPlan(P52, 0.9, 1000, 42))
    b = estimate_pr_ekr(TrialPlan(P52, 0.9, 1000, 42))
    assert a == b
    assert 0 < a.fraction < 1


def test_parallel_matches_serial():
    plan = TrialPlan(P73, 0.93, 120, 5)
    assert estimate_pr_ekr(plan, workers=3) == estimate_pr_ekr(plan)


def test_fraction_matches_brute_force_per_trial():
    plan = TrialPlan(P52, 0.85, 60, 9)
    truth = sum(brute_force_ekr(EdgeOracle(P52, 0.85, sub_seed(9, t)).adjacency(), P52)
                for t in range(60))
    assert estimate_pr_ekr(plan).ekr_count == truth


def test_exact_mode_beyond_ceiling_needs_budget():
    with pytest.raises(ResourceError):
        estimate_pr_ekr(TrialPlan(kneser_params(9, 4), 0.9, 10, 0))


def test_timed_out_trials_marked_inconclusive():
    plan = TrialPlan(kneser_params(9, 4), 1.0, 4, 0, budget=SearchLimits(max_nodes=50))
    est = estimate_pr_ekr(plan)
    assert est.inconclusive and est.timed_out == 4 and est.ekr_count == 0


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == pytest.approx(0.0, abs=1e-15) and 0.03 < hi < 0.04
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4) and hi == pytest.approx(0.5962, abs=1e-4)
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(100, 100)
    assert hi == 1.0 and lo < 1.0


def test_wilson_overlap_calibration():
    # two disjoint seed runs should give overlapping intervals almost always
    overlaps = 0
    reps = 60
    for r in range(reps):
        a = estimate_pr_ekr(TrialPlan(P52, 0.93, 150, 1000 + 2 * r)).wilson_ci
        b = estimate_pr_ekr(TrialPlan(P52, 0.93, 150, 1001 + 2 * r)).wilson_ci
        overlaps += a[0] <= b[1] and b[0] <= a[1]
    assert overlaps / reps >= 0.95


def test_near_star_rate_examples():
    assert near_star_rate(P52, 1.0, 50, 0) == 0.0
    assert near_star_rate(P52, 0.0, 50, 0) == 1.0
    p94 = kneser_params(9, 4)
    # at p = 1/2 about n N / 16 = 39 near-star violations are expected per graph
    assert near_star_rate(p94, 0.5, 40, 7) == 1.0
    r = near_star_rate(p94, 0.9, 100, 7)
    assert 0 < r < 1
    assert r == near_star_rate(p94, 0.9, 100, 7)


@pytest.mark.parametrize("p", [0.85, 0.9, 0.95])
def test_near_star_rate_below_violation_rate(p):
    trials = 300
    rate = near_star_rate(P73, p, trials, 4)
    est = estimate_pr_ekr(TrialPlan(P73, p, trials, 4))
    assert rate <= 1 - est.fraction
    # matched seeds: every near-star hit is a violation trial
    for t in range(40):
        o = EdgeOracle(P73, p, sub_seed(4, t))
        if has_near_star_violation(o):
            assert is_ekr(o).status == "Violation"


def test_estimate_pc_small():
    est = estimate_pc(P52, 300, 0.02, 1)
    lo, hi = est.bracket
    assert lo <= est.p_hat <= hi and hi - lo <= 0.02
    assert est.p0_reference == 0.75
    assert est == estimate_pc(P52, 300, 0.02, 1)
    # the empirical fraction is monotone along the probes
    probes = sorted(est.probes)
    assert [f for _, f in probes] == sorted(f for _, f in probes)
    below = [f for q, f in probes if q <= lo]
    above = [f for q, f in probes if q >= hi]
    assert all(f < 0.5 for f in below) and all(f >= 0.5 for f in above)


def test_estimate_pc_probe_matches_direct_estimate():
    est = estimate_pc(P52, 200, 0.05, 8)
    for q, f in est.probes:
        assert estimate_pr_ekr(TrialPlan(P52, q, 200, 8)).fraction == f


def test_near_star_threshold_below_exact():
    exact = estimate_pc(P52, 300, 0.02, 2)
    proxy = near_star_threshold(P52, 300, 0.02, 2)
    assert proxy.p_hat <= exact.bracket[1] + 1e-12


def test_trend_report():
    rows = pc_trend_report([2, 3], 60, 0.05, 0)
    assert [r["k"] for r in rows] == [2, 3]
    assert all(r["method"] == "exact" and r["p0_reference"] == 0.75 for r in rows)
    rows += pc_trend_report([4], 40, 0.05, 0)
    assert rows[-1]["method"] == "near-star-proxy"
    text = format_trend(rows)
    assert text.count("0.75") >= 3
    assert all(not math.isnan(r["p_hat"]) for r in rows)

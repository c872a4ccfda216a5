"""Monte Carlo estimates of Pr(K_p(n,k) is EKR) and of the threshold where it equals 1/2.

Trial ``t`` of a run with master seed ``s`` samples its graph from the edge
oracle seeded with ``sub_seed(s, t)``.  Because every probe of a bisection
reuses these seeds, each trial's EKR indicator is monotone in p.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .errors import ResourceError
from .kneser import (
    EXACT_CEILING, EdgeOracle, KneserParams, SearchLimits, has_near_star_violation, is_ekr,
    kneser_params,
)
from .rng import sub_seed

Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class TrialPlan:
    params: KneserParams
    p: float
    trials: int
    seed: int
    budget: SearchLimits = field(default_factory=SearchLimits)
    mode: str = "exact"


@dataclass(frozen=True)
class PrEstimate:
    fraction: float
    wilson_ci: tuple[float, float]
    ekr_count: int
    trials: int
    timed_out: int

    @property
    def inconclusive(self) -> bool:
        return self.timed_out > 0


def _trial_verdict(params, p, seed, budget, mode) -> tuple[bool, bool]:
    """(is EKR, conclusive) for one coupled trial."""
    v = is_ekr(EdgeOracle(params, p, seed), budget, mode=mode)
    return v.is_ekr, v.conclusive


def _run_chunk(args):
    params, p, seed, budget, mode, lo, hi = args
    ekr = timed = 0
    for t in range(lo, hi):
        ok, conclusive = _trial_verdict(params, p, sub_seed(seed, t), budget, mode)
        if not conclusive:
            timed += 1
        elif ok:
            ekr += 1
    return ekr, timed


def estimate_pr_ekr(plan: TrialPlan, workers: int = 1) -> PrEstimate:
    """Fraction of coupled trials whose sampled graph is EKR, with a Wilson 95% interval.

    Timed-out trials are excluded from the EKR count and reported separately.
    """
    if plan.mode == "exact" and plan.params.n > EXACT_CEILING and plan.budget.time_budget is None \
            and plan.budget.max_nodes is None:
        raise ResourceError("exact mode beyond n = 7 needs a search budget")
    bounds = [(plan.trials * i // workers, plan.trials * (i + 1) // workers) for i in range(workers)]
    jobs = [(plan.params, plan.p, plan.seed, plan.budget, plan.mode, lo, hi) for lo, hi in bounds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    ekr = sum(a for a, _ in parts)
    timed = sum(b for _, b in parts)
    return PrEstimate(ekr / plan.trials, wilson_interval(ekr, plan.trials), ekr, plan.trials, timed)


@dataclass(frozen=True)
class ThresholdEstimate:
    p_hat: float
    bracket: tuple[float, float]
    pr_at_p_hat: float
    wilson_ci: tuple[float, float]
    trials_used: int
    p0_reference: float
    probes: tuple[tuple[float, float], ...]
    timed_out: int = 0


class _CoupledTrials:
    """Per-trial EKR verdicts with monotone memoisation across probes."""

    def __init__(self, params, trials, seed, budget, mode):
        self.params = params
        self.seeds = [sub_seed(seed, t) for t in range(trials)]
        self.budget = budget
        self.mode = mode
        self.ekr_from = [math.inf] * trials     # EKR known for every p >= this
        self.viol_upto = [-math.inf] * trials   # violation known for every p <= this
        self.timed_out = 0

    def count(self, p: float) -> int:
        ekr = 0
        for t, s in enumerate(self.seeds):
            if p >= self.ekr_from[t]:
                ekr += 1
                continue
            if p <= self.viol_upto[t]:
                continue
            ok, conclusive = _trial_verdict(self.params, p, s, self.budget, self.mode)
            if not conclusive:
                self.timed_out += 1
                continue
            if ok:
                ekr += 1
                self.ekr_from[t] = p
            else:
                self.viol_upto[t] = p
        return ekr


def estimate_pc(params: KneserParams, trials: int, tolerance: float, seed: int,
                budget: Optional[SearchLimits] = None, mode: str = "exact") -> ThresholdEstimate:
    """Bisect p on [0, 1] for the point where the coupled EKR fraction crosses 1/2.

    The endpoints need no simulation: at p = 0 every M-family is independent
    and at p = 1 the full Kneser graph is EKR.
    """
    budget = budget or SearchLimits()
    if mode == "exact" and params.n > EXACT_CEILING and budget.time_budget is None \
            and budget.max_nodes is None:
        raise ResourceError("exact mode beyond n = 7 needs a search budget")
    runs = _CoupledTrials(params, trials, seed, budget, mode)
    lo, hi = 0.0, 1.0
    probes = []
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        frac = runs.count(mid) / trials
        probes.append((mid, frac))
        if frac >= 0.5:
            hi = mid
        else:
            lo = mid
    p_hat = (lo + hi) / 2
    ekr = runs.count(p_hat)
    probes.append((p_hat, ekr / trials))
    return ThresholdEstimate(
        p_hat=p_hat, bracket=(lo, hi), pr_at_p_hat=ekr / trials,
        wilson_ci=wilson_interval(ekr, trials), trials_used=trials,
        p0_reference=params.p_zero, probes=tuple(probes), timed_out=runs.timed_out,
    )


def near_star_rate(params: KneserParams, p: float, trials: int, seed: int) -> float:
    """Fraction of coupled trials with an independent near-star family (a lower bound on 1 - Pr(EKR))."""
    hits = 0
    for t in range(trials):
        if has_near_star_violation(EdgeOracle(params, p, sub_seed(seed, t))):
            hits += 1
    return hits / trials


def near_star_threshold(params: KneserParams, trials: int, tolerance: float, seed: int) -> ThresholdEstimate:
    """Bisection on 1 - near_star_rate = 1/2; a lower estimate of the EKR threshold."""
    lo, hi = 0.0, 1.0
    probes = []
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        frac = 1 - near_star_rate(params, mid, trials, seed)
        probes.append((mid, frac))
        if frac >= 0.5:
            hi = mid
        else:
            lo = mid
    p_hat = (lo + hi) / 2
    frac = 1 - near_star_rate(params, p_hat, trials, seed)
    probes.append((p_hat, frac))
    ok = round(frac * trials)
    return ThresholdEstimate(p_hat, (lo, hi), frac, wilson_interval(ok, trials), trials,
                             params.p_zero, tuple(probes))


def pc_trend_report(k_values, trials: int, tol: float, seed: int) -> list[dict]:
    """One row per k for n = 2k + 1: exact estimate where feasible, near-star proxy otherwise."""
    rows = []
    for k in k_values:
        params = kneser_params(2 * k + 1, k)
        if params.n <= EXACT_CEILING:
            est = estimate_pc(params, trials, tol, seed)
            method = "exact"
        else:
            est = near_star_threshold(params, trials, tol, seed)
            method = "near-star-proxy"
        rows.append({
            "k": k, "n": params.n, "method": method, "p_hat": est.p_hat,
            "p_lo": est.bracket[0], "p_hi": est.bracket[1],
            "pr_at_p_hat": est.pr_at_p_hat, "p0_reference": params.p_zero,
        })
    return rows


def format_trend(rows: list[dict]) -> str:
    lines = [f"{'k':>3} {'n':>3} {'method':>16} {'p_hat':>8} {'bracket':>17} {'p0 (n=2k+1)':>12}"]
    for r in rows:
        lines.append(f"{r['k']:>3} {r['n']:>3} {r['method']:>16} {r['p_hat']:>8.4f} "
                     f"[{r['p_lo']:.4f}, {r['p_hi']:.4f}] {r['p0_reference']:>12.2f}")
    return "\n".join(lines)

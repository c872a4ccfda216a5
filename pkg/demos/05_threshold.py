"""
Where K_p(n,k) stops being EKR
==============================

Bisect p with the same trial seeds at every probe.  The reference value
for n = 2k+1 is 3/4.  Small trial counts keep this quick; the acceptance
suite uses 2000.
"""

from kneser_ekr.kneser import kneser_params
from kneser_ekr.montecarlo import (
    TrialPlan, estimate_pc, estimate_pr_ekr, format_trend, near_star_rate, pc_trend_report,
)

P = kneser_params(5, 2)
for p in (0.8, 0.9, 0.95, 0.99):
    est = estimate_pr_ekr(TrialPlan(P, p, 400, seed=1))
    print(f"p={p:.2f}  Pr(EKR)~{est.fraction:.3f}  95% CI [{est.wilson_ci[0]:.3f}, {est.wilson_ci[1]:.3f}]"
          f"  near-star rate {near_star_rate(P, p, 400, 1):.3f}")

est = estimate_pc(P, 400, 0.01, seed=1)
print("p_hat =", round(est.p_hat, 4), "bracket", est.bracket, "Pr there =", est.pr_at_p_hat)

print(format_trend(pc_trend_report([2, 3, 4], 100, 0.02, seed=0)))

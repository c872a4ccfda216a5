"""
Edges inside a non-star family
==============================

Split a non-star M-family at its busiest element, check the exact counting
identities, then walk down the chain of lower bounds on e(F).
"""

import random

from kneser_ekr import bounds as bl
from kneser_ekr.combinatorics import KSubset
from kneser_ekr.kneser import family_stats, kneser_params

S = KSubset.of
P = kneser_params(5, 2)
F = family_stats([S(1, 2), S(1, 3), S(1, 4), S(2, 3)], P)
ctx = bl.apex_context(F, P)
print("apex", ctx.x, " A =", ctx.A, " B =", ctx.B, " mu =", ctx.mu)

print("identity residuals:", bl.verify_mo1(ctx), bl.verify_gle(ctx),
      bl.verify_mo2(P.m, P.k, P.c, ctx.A))
print("Lambda(A, B-bar) =", bl.lambda_count(ctx.A, ctx.B_bar), ">=", bl.betaprop_bound(ctx))
print(bl.mainobs2_bound(ctx, bl.BoundConfig(gamma=0.5)))

# the smallest ratio over every non-star family of K(5,2)
scan = bl.exhaustive_theta(P)
print("theta* =", round(scan.theta_star, 6), "over", scan.families, "families; argmin",
      scan.argmin.sorted_members())

# random families at (7,3)
P73 = kneser_params(7, 3)
rng = random.Random(0)
worst = min(F.internal_edges - bl.mainobs2_bound(bl.apex_context(F, P73), bl.BoundConfig()).term1
            for F in (bl.random_nonstar_family(P73, rng) for _ in range(500)))
print("(7,3): smallest slack e(F) - term1 over 500 families:", round(worst, 4))

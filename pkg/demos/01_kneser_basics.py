"""
Kneser graphs, stars and the EKR check
======================================

Vertices are the k-subsets of {1..n}; two are adjacent when disjoint.
"""

from kneser_ekr.combinatorics import KSubset, enumerate_k_subsets
from kneser_ekr.kneser import (
    EdgeOracle, ExplicitOracle, family_stats, is_ekr, kneser_params, near_star_scan, star,
)

# derived constants for the Petersen graph K(5,2)
P = kneser_params(5, 2)
print(P)
print("star size M =", P.M, " non-star vertices N =", P.N)

# colex order of the vertices
print([str(s) for s in enumerate_k_subsets(5, 2)])

# a star and a family one swap away from it
S = KSubset.of
print("star at 1:", family_stats(star(P, 1), P).sorted_members())
F = family_stats([S(1, 2), S(1, 3), S(1, 4), S(2, 3)], P)
print("near-star:", F.sorted_members(), " a_F =", F.a_F, " e(F) =", F.internal_edges)

# p = 1 keeps every edge: only stars survive as maximum independent sets
print(is_ekr(EdgeOracle(P, 1.0, seed=0)))

# drop the single edge inside F and it becomes an independent non-star witness
broken = ExplicitOracle.full_minus(P, [(S(1, 4), S(2, 3))])
v = is_ekr(broken)
print(v.status, v.witness.sorted_members())

# a random subgraph: keep each edge with probability 0.9
o = EdgeOracle(kneser_params(7, 3), 0.9, seed=11)
v = is_ekr(o)
print("K_0.9(7,3), seed 11:", v.status, "after", v.nodes, "search nodes")
print("near-star witnesses:", len(near_star_scan(o)))

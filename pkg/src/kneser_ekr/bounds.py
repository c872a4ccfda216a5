"""Counting identities and the edge lower-bound chain for M-families of k-sets.

Everything about a non-star family F is measured after splitting it at a
maximum-degree element x: the members avoiding x form A (level k over the
(n-1)-set [n] - {x}) and the complements of the missing star members form
B (level k+c).  Identities are checked as exact integer residuals.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from .combinatorics import KSubset, binomial, compress_mask, k_subset_masks, popcount, rank_bits
from .errors import ContractError, DomainError, ResourceError
from .johnson import (
    _johnson_adj, boundary_from_index_mask, laplacian_gap_formula, laplacian_gap_numeric,
    log_sobolev_ratio,
)
from .kneser import Family, KneserParams, family_stats, kneser_structure, split_at_apex, star

THEOREM_SLACK = 1e-9


@dataclass(frozen=True)
class BoundConfig:
    theta: float = 0.05
    gamma: float = 0.3
    epsilon: float = 0.01
    bigC: float = 100.0
    bigK: float = 1.0
    zeta: Optional[float] = None   # None: largest value the precondition allows
    xi: Optional[float] = None     # None: log(1/epsilon) if c == 1, else p

    def validate(self):
        if not self.theta > 0:
            raise DomainError("theta must be positive")
        if not 0 < self.epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)")
        if not self.bigK > 0:
            raise DomainError("K must be positive")

    def zeta_max(self, params: KneserParams) -> float:
        return params.c / ((10 * self.bigK) ** 2 * params.n)

    def zeta_for(self, params: KneserParams) -> float:
        return self.zeta_max(params) if self.zeta is None else self.zeta

    def xi_for(self, params: KneserParams, p: float) -> float:
        if self.xi is not None:
            return self.xi
        return math.log(1 / self.epsilon) if params.c == 1 else p

    @property
    def theta_admissible(self) -> bool:
        return self.theta < self.gamma / 5


def sufficient_constants(theta: float) -> tuple[float, float]:
    """(largest epsilon, smallest C) that make the union bound small for this theta."""
    return math.exp(-5 / theta), 4 / theta


# ---------------------------------------------------------------------------
# apex contexts

@dataclass(frozen=True)
class ApexContext:
    params: KneserParams
    F: Family
    x: int
    A: tuple[int, ...]        # level-k masks over [m]
    B: tuple[int, ...]        # level-(k+c) masks over [m]
    A_bar: tuple[int, ...]
    B_bar: tuple[int, ...]
    mu: float

    @property
    def size(self) -> int:
        return len(self.A)


@lru_cache(maxsize=64)
def _levels(m: int, k: int, c: int):
    return tuple(k_subset_masks(m, k)), tuple(k_subset_masks(m, k + c))


def apex_context(F: Family, params: KneserParams, x: Optional[int] = None) -> ApexContext:
    if x is None:
        x = F.apex_set[0]
    A_orig, B_orig = split_at_apex(F, x)
    m, k, c = params.m, params.k, params.c
    A = tuple(sorted(compress_mask(s.bits, x) for s in A_orig))
    B = tuple(sorted(compress_mask(s.bits, x) for s in B_orig))
    gk, gkc = _levels(m, k, c)
    a_set, b_set = set(A), set(B)
    return ApexContext(
        params=params, F=F, x=x, A=A, B=B,
        A_bar=tuple(s for s in gk if s not in a_set),
        B_bar=tuple(s for s in gkc if s not in b_set),
        mu=len(A) / params.N,
    )


def _masks(family) -> list[int]:
    return [s.bits if isinstance(s, KSubset) else int(s) for s in family]


def lambda_count(S: Iterable, T: Iterable) -> int:
    """Number of pairs (A, B) in S x T with A contained in B."""
    s, t = _masks(S), _masks(T)
    if len({popcount(a) for a in s}) > 1 or len({popcount(b) for b in t}) > 1:
        raise ContractError("each argument must lie on a single level")
    if s and t and popcount(s[0]) > popcount(t[0]):
        raise ContractError("first family must sit on the lower level")
    return sum(1 for a in s for b in t if not a & ~b)


def _disjoint_pairs(masks) -> int:
    return sum(1 for a, b in itertools.combinations(masks, 2) if not a & b)


def verify_mo1(ctx: ApexContext) -> int:
    k, c = ctx.params.k, ctx.params.c
    return (lambda_count(ctx.A_bar, ctx.B) - lambda_count(ctx.A, ctx.B_bar)
            - binomial(k + c - 1, c - 1) * ctx.size)


def verify_gle(ctx: ApexContext) -> int:
    return ctx.F.internal_edges - lambda_count(ctx.A, ctx.B_bar) - _disjoint_pairs(ctx.A)


def _index_mask(masks) -> int:
    out = 0
    for b in masks:
        out |= 1 << rank_bits(b)
    return out


def beta(m: int, k: int, i: int, masks) -> int:
    return boundary_from_index_mask(_johnson_adj(m, k, i), _index_mask(masks))


def count_phi(m: int, k: int, c: int, A) -> int:
    """Triples (A', B, A'') in A x level(k+c) x (complement of A) with A' ~_1 A'' and A' u A'' inside B."""
    a_masks = _masks(A)
    a_set = set(a_masks)
    gk, gkc = _levels(m, k, c)
    total = 0
    for a1 in a_masks:
        for a2 in gk:
            if a2 in a_set or popcount(a1 ^ a2) != 2:
                continue
            u = a1 | a2
            for b in gkc:
                if not u & ~b:
                    total += 1
    return total


def verify_mo2(m: int, k: int, c: int, A) -> int:
    """Phi - beta_1(A) C(m-k-1, c-1); the multiplier is C(k+c-2, c-1) when m = 2k+c-1."""
    a_masks = _masks(A)
    if any(popcount(a) != k or a >> m for a in a_masks):
        raise ContractError(f"members must be {k}-subsets of [{m}]")
    return count_phi(m, k, c, a_masks) - beta(m, k, 1, a_masks) * binomial(m - k - 1, c - 1)


def betaprop_bound(ctx: ApexContext) -> Fraction:
    """Lower bound on Lambda(A, complement of B) from the two edge boundaries of A."""
    if ctx.size == 0:
        raise DomainError("a star has no apex context (a_F = 0)")
    m, k, c = ctx.params.m, ctx.params.k, ctx.params.c
    b_c = beta(m, k, c, ctx.A)
    b_1 = beta(m, k, 1, ctx.A)
    first = Fraction(b_c, 2 * binomial(k, c))
    second = Fraction(binomial(k + c - 2, c - 1) * b_1, 2 * c * k)
    return max(first, second) - Fraction(binomial(k + c - 1, c - 1) * ctx.size, 2)


@lru_cache(maxsize=256)
def _gap(m: int, k: int, c: int) -> tuple[float, str]:
    gf = laplacian_gap_formula(m, k, c)
    if gf.proven_regime:
        return float(gf.value), "formula"
    return laplacian_gap_numeric(m, k, c), "numeric"


class Mainobs2Terms(NamedTuple):
    term1: float
    term2: float
    gap: float
    gap_source: str


def mainobs2_bound(ctx: ApexContext, cfg: BoundConfig) -> Mainobs2Terms:
    """The two arguments of the combined lower bound on e(F), each scaled by (|A|/2) C(k+c-2, c-1).

    term1 substitutes the expansion bound with the Laplacian gap into the
    first boundary term; with the closed-form gap it reduces to
    (|A|/2) C(k+c-2,c-1) (1 - (m/k) mu).  term2 uses the configured gamma.
    """
    if ctx.size == 0 or ctx.mu <= 0:
        raise DomainError("mu = 0: the bound needs a_F >= 1")
    m, k, c = ctx.params.m, ctx.params.k, ctx.params.c
    a = ctx.size
    gap, source = _gap(m, k, c)
    term1 = gap * a * (1 - ctx.mu) / (2 * binomial(k, c)) - binomial(k + c - 1, c - 1) * a / 2
    scale = a / 2 * binomial(k + c - 2, c - 1)
    term2 = scale * (cfg.gamma * m / (c * k) * math.log(1 / ctx.mu) - (k + c - 1) / k)
    return Mainobs2Terms(term1, term2, gap, source)


def closed_form_term1(ctx: ApexContext) -> float:
    m, k, c = ctx.params.m, ctx.params.k, ctx.params.c
    return ctx.size / 2 * binomial(k + c - 2, c - 1) * (1 - m / k * ctx.mu)


# ---------------------------------------------------------------------------
# the per-family edge lower bound

def lemma_ml_ratio(F: Family, params: KneserParams) -> float:
    """e(F) k / (C(n-k-1,k-1) a_F log(N/a_F)): the largest theta the bound allows at F."""
    if len(F) != params.M:
        raise ContractError("family must have exactly M members")
    if F.is_star or F.a_F == 0:
        raise DomainError("stars have a_F = 0")
    if F.a_F >= params.N:
        return math.inf
    denom = params.star_edge_degree * F.a_F * math.log(params.N / F.a_F)
    return F.internal_edges * params.k / denom


@dataclass(frozen=True)
class ThetaScan:
    theta_star: float
    argmin: Family
    families: int
    min_edges: int
    exhaustive: bool


def iter_nonstar_families(params: KneserParams):
    st = kneser_structure(params.n, params.k)
    stars = {frozenset(i for i in range(params.vertex_count) if s >> i & 1) for s in st.stars}
    for combo in itertools.combinations(range(params.vertex_count), params.M):
        if frozenset(combo) in stars:
            continue
        yield family_stats((KSubset(st.masks[i], params.k) for i in combo), params)


def exhaustive_theta(params: KneserParams, budget: int = 10**6) -> ThetaScan:
    total = binomial(params.vertex_count, params.M)
    if total > budget:
        raise ResourceError(f"C({params.vertex_count},{params.M}) = {total} families exceeds budget")
    best = None
    count = 0
    min_e = None
    for F in iter_nonstar_families(params):
        count += 1
        r = lemma_ml_ratio(F, params)
        if best is None or r < best[0]:
            best = (r, F)
        min_e = F.internal_edges if min_e is None else min(min_e, F.internal_edges)
    return ThetaScan(best[0], best[1], count, min_e, True)


def random_nonstar_family(params: KneserParams, rng: random.Random) -> Family:
    st = kneser_structure(params.n, params.k)
    while True:
        idx = rng.sample(range(params.vertex_count), params.M)
        vmask = sum(1 << i for i in idx)
        if vmask not in st.stars:
            return family_stats((KSubset(st.masks[i], params.k) for i in idx), params)


def near_star_families(params: KneserParams):
    """All families (K_x - {B}) + {A} with A outside K_x."""
    st = kneser_structure(params.n, params.k)
    seen = set()
    for R in st.stars:
        inside = [i for i in range(params.vertex_count) if R >> i & 1]
        outside = [i for i in range(params.vertex_count) if not R >> i & 1]
        for b in inside:
            for a in outside:
                g = (R & ~(1 << b)) | (1 << a)
                if g in seen:
                    continue
                seen.add(g)
                yield family_stats(
                    (KSubset(st.masks[i], params.k) for i in range(params.vertex_count) if g >> i & 1),
                    params)


def sampled_theta(params: KneserParams, samples: int, seed: int = 0,
                  include_near_stars: bool = True) -> ThetaScan:
    """Minimum ratio over random non-star M-families plus every near-star family."""
    rng = random.Random(seed)
    best = None
    min_e = None
    count = 0
    fams = (random_nonstar_family(params, rng) for _ in range(samples))
    if include_near_stars:
        fams = itertools.chain(fams, near_star_families(params))
    for F in fams:
        count += 1
        r = lemma_ml_ratio(F, params)
        if best is None or r < best[0]:
            best = (r, F)
        min_e = F.internal_edges if min_e is None else min(min_e, F.internal_edges)
    return ThetaScan(best[0], best[1], count, min_e, False)


class DtBound(NamedTuple):
    applicable: bool
    bound: float
    holds: Optional[bool]


def dt_bound(params: KneserParams, cfg: BoundConfig, F: Family) -> DtBound:
    """Das-Tran edge bound e(F) > zeta M C(n-k-1,k-1) for families far from every star."""
    zeta = cfg.zeta_for(params)
    bound = zeta * params.M * params.star_edge_degree
    applicable = (zeta <= cfg.zeta_max(params)
                  and F.a_F > cfg.bigK * zeta * params.n / params.c * params.M)
    holds = (F.internal_edges > bound) if applicable else None
    return DtBound(applicable, bound, holds)


def union_bound_value(params: KneserParams, p: float, cfg: BoundConfig) -> float:
    """n * sum over 0 < a <= kN/n of C(M,a) C(N,a) exp(-xi theta C(n-k-1,k-1) a log(N/a) / k)."""
    cfg.validate()
    xi = cfg.xi_for(params, p)
    rate = xi * cfg.theta * params.star_edge_degree / params.k
    logs = [math.log(binomial(params.M, a)) + math.log(binomial(params.N, a))
            - rate * a * math.log(params.N / a) for a in range(1, params.max_a + 1)]
    top = max(logs)
    scaled = math.fsum(math.exp(t - top) for t in logs)
    log_total = math.log(params.n) + top + math.log(scaled)
    return math.exp(log_total) if log_total < 709.0 else math.inf


@dataclass(frozen=True)
class TargetReport:
    lhs: float
    rhs: float
    lhs_below_rhs: bool
    branch: int
    term: float             # max argument (unscaled) used in the branch
    term_exceeds_rhs: bool
    term_floor: Optional[float]   # (gamma/c) log(1/mu) in branch 2
    theta_admissible: bool


def target_comparison(ctx: ApexContext, cfg: BoundConfig) -> TargetReport:
    if ctx.size == 0:
        raise DomainError("target comparison needs a_F >= 1")
    m, k, c = ctx.params.m, ctx.params.k, ctx.params.c
    log_inv_mu = math.log(1 / ctx.mu)
    lhs = 2 * (k + c - 1) / (c * k) * cfg.theta * math.log(ctx.params.N / ctx.F.a_F)
    rhs = 4 / c * cfg.theta * log_inv_mu
    if log_inv_mu <= c / cfg.gamma:
        branch = 1
        term = 1 - m / k * ctx.mu
        floor = None
    else:
        branch = 2
        term = cfg.gamma * m / (c * k) * log_inv_mu - (k + c - 1) / k
        floor = cfg.gamma / c * log_inv_mu
    return TargetReport(lhs, rhs, lhs < rhs, branch, term, term > rhs, floor, cfg.theta_admissible)


def calibrate_gamma(m: int, k: int, families) -> float:
    """Smallest log-Sobolev ratio over a battery of proper nonempty subsets of level k."""
    return min(log_sobolev_ratio(m, k, A) for A in families)

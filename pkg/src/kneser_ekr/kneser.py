"""Kneser graphs K(n, k), the random subgraph model K_p(n, k) and the EKR checker.

Vertices are k-subsets of [n] indexed by colex rank.  A sampled subgraph is
held as a tuple of adjacency bitmasks over those ranks.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .combinatorics import KSubset, binomial, k_subset_masks, popcount, rank_bits
from .errors import ContractError, DomainError, ResourceError
from .rng import keyed_uniform

EXACT_CEILING = 7


@dataclass(frozen=True)
class KneserParams:
    n: int
    k: int
    c: int
    m: int
    M: int
    N: int
    vertex_count: int
    p_zero: float

    @property
    def star_edge_degree(self) -> int:
        """C(n-k-1, k-1): Kneser neighbours inside a star of a set outside it."""
        return binomial(self.n - self.k - 1, self.k - 1)

    @property
    def max_a(self) -> int:
        """Largest integer a with a <= kN/n."""
        return self.k * self.N // self.n


def kneser_params(n: int, k: int) -> KneserParams:
    if n > 64:
        raise DomainError("n > 64 is out of scope")
    if not (0 < k and 2 * k < n):
        raise DomainError(f"need 0 < k < n/2, got n={n}, k={k}")
    c = n - 2 * k
    N = binomial(n - 1, k)
    if c == 1:
        p_zero = 0.75
    else:
        p_zero = math.log(n * N) / binomial(n - k - 1, k - 1)
    return KneserParams(
        n=n, k=k, c=c, m=n - 1, M=binomial(n - 1, k - 1), N=N,
        vertex_count=binomial(n, k), p_zero=p_zero,
    )


@dataclass(frozen=True)
class _Structure:
    masks: tuple[int, ...]
    index: dict
    stars: tuple[int, ...]         # stars[x-1]: vertex-index bitmask of K_x
    edges: tuple[tuple[int, int], ...]
    kneser_adj: tuple[int, ...]


@lru_cache(maxsize=64)
def kneser_structure(n: int, k: int) -> _Structure:
    masks = tuple(k_subset_masks(n, k))
    index = {b: i for i, b in enumerate(masks)}
    stars = []
    for x in range(1, n + 1):
        bit = 1 << (x - 1)
        s = 0
        for i, b in enumerate(masks):
            if b & bit:
                s |= 1 << i
        stars.append(s)
    edges = []
    adj = [0] * len(masks)
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if not a & masks[j]:
                edges.append((i, j))
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return _Structure(masks, index, tuple(stars), tuple(edges), tuple(adj))


def is_disjoint(a: KSubset, b: KSubset) -> bool:
    return a.bits & b.bits == 0


# ---------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class Family:
    members: frozenset
    n: int
    k: int
    degree_vector: tuple[int, ...]
    max_degree: int
    apex_set: tuple[int, ...]
    a_F: int
    internal_edges: int
    star_witness: Optional[int]

    def __len__(self):
        return len(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_star(self) -> bool:
        return self.star_witness is not None

    def sorted_members(self) -> list[KSubset]:
        return sorted(self.members, key=lambda s: s.bits)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(s.bits for s in self.members))


def family_stats(members: Iterable[KSubset], params: KneserParams) -> Family:
    members = frozenset(members)
    n, k = params.n, params.k
    ground = (1 << n) - 1
    for s in members:
        if s.size != k or s.bits & ~ground:
            raise ContractError(f"{s} is not a {k}-subset of [{n}]")
    bits = [s.bits for s in members]
    degrees = tuple(sum(1 for b in bits if b >> x & 1) for x in range(n))
    delta = max(degrees) if bits else 0
    apex = tuple(x + 1 for x in range(n) if degrees[x] == delta) if bits else ()
    e = 0
    for i, a in enumerate(bits):
        for b in bits[i + 1:]:
            if not a & b:
                e += 1
    star = None
    if len(bits) == params.M:
        common = ground
        for b in bits:
            common &= b
        if common:
            star = (common & -common).bit_length()
    return Family(
        members=members, n=n, k=k, degree_vector=degrees, max_degree=delta,
        apex_set=apex, a_F=params.M - delta, internal_edges=e, star_witness=star,
    )


def star(params: KneserParams, x: int) -> frozenset:
    bit = 1 << (x - 1)
    return frozenset(KSubset(b, params.k) for b in k_subset_masks(params.n, params.k) if b & bit)


def split_at_apex(F: Family, x: int) -> tuple[frozenset, frozenset]:
    """Split an M-family at a maximum-degree element ``x``.

    Returns ``(A, B)``: the members avoiding ``x``, and the complements in
    [n] of the star members missing from ``F``.  Both keep the original
    element labels, so they live on the ground set [n] minus ``x``.
    """
    if x not in F.apex_set:
        raise ContractError(f"element {x} does not attain the maximum degree")
    n, k = F.n, F.k
    M = binomial(n - 1, k - 1)
    if len(F) != M:
        raise ContractError("split_at_apex needs |F| = M")
    bit = 1 << (x - 1)
    ground = (1 << n) - 1
    A = frozenset(s for s in F.members if not s.bits & bit)
    present = {s.bits for s in F.members}
    B = frozenset(
        KSubset.from_bits(ground & ~t) for t in k_subset_masks(n, k)
        if t & bit and t not in present
    )
    return A, B


# ---------------------------------------------------------------------------
# random edge model

@lru_cache(maxsize=16384)
def _edge_uniforms(n: int, k: int, seed: int) -> tuple[float, ...]:
    st = kneser_structure(n, k)
    return tuple(keyed_uniform(seed, i, j) for i, j in st.edges)


@lru_cache(maxsize=16384)
def _sampled_adjacency(n: int, k: int, seed: int, p: float) -> tuple[int, ...]:
    st = kneser_structure(n, k)
    adj = [0] * len(st.masks)
    for (i, j), u in zip(st.edges, _edge_uniforms(n, k, seed)):
        if u < p:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return tuple(adj)


@dataclass(frozen=True)
class EdgeOracle:
    """Seeded presence function for the edges of K_p(n, k).

    An edge {A, B} is present iff ``u(seed, rank(A), rank(B)) < p`` with the
    ranks ordered low-high, so oracles sharing a seed are coupled across p.
    """

    params: KneserParams
    p: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p={self.p} outside [0, 1]")

    def uniform(self, ra: int, rb: int) -> float:
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        return keyed_uniform(self.seed, lo, hi)

    def present_ranks(self, ra: int, rb: int) -> bool:
        return self.uniform(ra, rb) < self.p

    def adjacency(self) -> tuple[int, ...]:
        return _sampled_adjacency(self.params.n, self.params.k, self.seed, self.p)

    def with_p(self, p: float) -> "EdgeOracle":
        return EdgeOracle(self.params, p, self.seed)


@dataclass(frozen=True)
class ExplicitOracle:
    """A fixed subgraph of K(n, k) given by its edge set (pairs of colex ranks)."""

    params: KneserParams
    edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_pairs(cls, params: KneserParams, pairs) -> "ExplicitOracle":
        es = set()
        for a, b in pairs:
            if a.bits & b.bits:
                raise ContractError(f"{a}, {b} is not a Kneser edge")
            ra, rb = rank_bits(a.bits), rank_bits(b.bits)
            es.add((min(ra, rb), max(ra, rb)))
        return cls(params, frozenset(es))

    @classmethod
    def full_minus(cls, params: KneserParams, removed) -> "ExplicitOracle":
        st = kneser_structure(params.n, params.k)
        drop = {tuple(sorted((rank_bits(a.bits), rank_bits(b.bits)))) for a, b in removed}
        return cls(params, frozenset(e for e in st.edges if e not in drop))

    def present_ranks(self, ra: int, rb: int) -> bool:
        return (min(ra, rb), max(ra, rb)) in self.edges

    def adjacency(self) -> tuple[int, ...]:
        adj = [0] * self.params.vertex_count
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return tuple(adj)


def edge_present(oracle, a: KSubset, b: KSubset) -> bool:
    if a.bits & b.bits:
        raise ContractError(f"{a} and {b} intersect: not an edge of K(n,k)")
    return oracle.present_ranks(rank_bits(a.bits), rank_bits(b.bits))


def is_independent(members: Iterable[KSubset], oracle) -> bool:
    ms = list(members)
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if not a.bits & b.bits and edge_present(oracle, a, b):
                return False
    return True


# ---------------------------------------------------------------------------
# EKR checking

@dataclass(frozen=True)
class SearchLimits:
    max_nodes: Optional[int] = None
    time_budget: Optional[float] = None


@dataclass(frozen=True)
class EkrVerdict:
    status: str                       # "EKR" or "Violation"
    witness: Optional[Family]
    method: str                       # "exhaustive-search", "near-star-only" or "timed-out"
    nodes: int = 0

    @property
    def is_ekr(self) -> bool:
        return self.status == "EKR"

    @property
    def conclusive(self) -> bool:
        return self.method == "exhaustive-search" or self.status == "Violation"


class _Budget(Exception):
    pass


def _family_from_vertices(vmask: int, params: KneserParams) -> Family:
    st = kneser_structure(params.n, params.k)
    members = []
    i = 0
    while vmask:
        if vmask & 1:
            members.append(KSubset(st.masks[i], params.k))
        vmask >>= 1
        i += 1
    return family_stats(members, params)


def _find_violation(adj, params: KneserParams, limits: SearchLimits):
    """Search for an independent family of size >= M that is not a star.

    For each candidate apex x, grow independent sets A of non-members of
    K_x while tracking N(A), their sampled neighbours in K_x.  Whenever
    |N(A)| <= |A|, the family A + (K_x - N(A)) is independent with at least
    M members.  Any non-star independent M-family F arises this way from
    x = a maximum-degree element and A = F - K_x, and then |A| = a_F <= kN/n,
    which bounds both |A| and |N(A)|.
    """
    st = kneser_structure(params.n, params.k)
    M = params.M
    amax = params.max_a
    full = (1 << params.vertex_count) - 1
    star_set = set(st.stars)
    nodes = 0
    deadline = None if limits.time_budget is None else time.perf_counter() + limits.time_budget
    max_nodes = limits.max_nodes

    def tick():
        nonlocal nodes
        nodes += 1
        if nodes & 255 == 0:
            if max_nodes is not None and nodes > max_nodes:
                raise _Budget
            if deadline is not None and time.perf_counter() > deadline:
                raise _Budget

    for R in st.stars:
        L = full & ~R
        nR = {}
        nL = {}
        left = []
        v = 0
        rest = L
        while rest:
            if rest & 1:
                nR[v] = adj[v] & R
                nL[v] = adj[v] & L
                left.append(v)
            rest >>= 1
            v += 1
        left.sort(key=lambda w: (popcount(nR[w]), w))
        cands0 = [w for w in left if popcount(nR[w]) <= amax]

        def dfs(amask, na, size, cands):
            for idx, w in enumerate(cands):
                tick()
                na2 = na | nR[w]
                a2 = amask | (1 << w)
                size2 = size + 1
                c2 = popcount(na2)
                if c2 <= size2:
                    g = a2 | (R & ~na2)
                    if popcount(g) > M or g not in star_set:
                        return g
                if size2 >= amax:
                    continue
                adj_w = nL[w]
                nxt = [u for u in cands[idx + 1:]
                       if not adj_w >> u & 1 and popcount(na2 | nR[u]) <= amax]
                if c2 - size2 > len(nxt):
                    continue
                if nxt:
                    g = dfs(a2, na2, size2, nxt)
                    if g is not None:
                        return g
            return None

        g = dfs(0, 0, 0, cands0)
        if g is not None:
            return g, nodes
    return None, nodes


def is_ekr(oracle, limits: Optional[SearchLimits] = None, mode: str = "exact") -> EkrVerdict:
    """Decide whether every largest independent set of the sampled graph is a star.

    Implemented as: no non-star independent family of size M exists (an
    independent family larger than M would contain one).
    """
    params = oracle.params
    if mode == "near-star-only":
        hits = near_star_scan(oracle)
        if hits:
            return EkrVerdict("Violation", hits[0], "near-star-only")
        return EkrVerdict("EKR", None, "near-star-only")
    if mode != "exact":
        raise DomainError(f"unknown mode {mode!r}")
    limits = limits or SearchLimits()
    if params.n > EXACT_CEILING and limits.time_budget is None and limits.max_nodes is None:
        raise DomainError(
            f"exact search is only guaranteed for n <= {EXACT_CEILING}; supply a budget")
    adj = oracle.adjacency()
    try:
        g, nodes = _find_violation(adj, params, limits)
    except _Budget:
        return EkrVerdict("EKR", None, "timed-out")
    if g is None:
        return EkrVerdict("EKR", None, "exhaustive-search", nodes)
    return EkrVerdict("Violation", _family_from_vertices(g, params), "exhaustive-search", nodes)


def near_star_candidate_count(params: KneserParams) -> int:
    return params.n * params.M * params.N


def near_star_scan(oracle) -> list[Family]:
    """Independent families of the form (K_x - {B}) + {A}, with A outside K_x."""
    params = oracle.params
    st = kneser_structure(params.n, params.k)
    adj = oracle.adjacency()
    full = (1 << params.vertex_count) - 1
    seen = set()
    hits = []
    for R in st.stars:
        L = full & ~R
        v = 0
        rest = L
        while rest:
            if rest & 1:
                nbr = adj[v] & R
                cnt = popcount(nbr)
                if cnt == 0:
                    drops = R
                elif cnt == 1:
                    drops = nbr
                else:
                    drops = 0
                while drops:
                    low = drops & -drops
                    g = (R & ~low) | (1 << v)
                    if g not in seen:
                        seen.add(g)
                        hits.append(g)
                    drops ^= low
            rest >>= 1
            v += 1
    return [_family_from_vertices(g, params) for g in sorted(hits)]


def has_near_star_violation(oracle) -> bool:
    params = oracle.params
    st = kneser_structure(params.n, params.k)
    adj = oracle.adjacency()
    for R in st.stars:
        for v in range(params.vertex_count):
            if not R >> v & 1 and popcount(adj[v] & R) <= 1:
                return True
    return False

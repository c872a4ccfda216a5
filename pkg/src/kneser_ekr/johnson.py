"""Johnson-scheme graphs J_i(m, k): eigenvalues, Laplacian gap and edge boundaries.

Vertex sets are subsets of ``[m]`` given as :class:`KSubset` values (or raw
masks); vertices of J_i(m, k) are indexed by colex rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .combinatorics import KSubset, binomial, k_subset_masks, popcount, rank_bits
from .errors import ContractError, DomainError, ResourceError

DENSE_BUDGET = 300


@dataclass(frozen=True)
class JohnsonGraph:
    m: int
    k: int
    i: int

    def __post_init__(self):
        if not (0 <= self.k <= self.m and 1 <= self.i <= self.k):
            raise DomainError(f"bad Johnson parameters m={self.m}, k={self.k}, i={self.i}")

    @property
    def degree(self) -> int:
        return binomial(self.k, self.i) * binomial(self.m - self.k, self.i)

    @property
    def order(self) -> int:
        return binomial(self.m, self.k)

    def adjacency_masks(self) -> tuple[int, ...]:
        return _johnson_adj(self.m, self.k, self.i)

    def adjacency_matrix(self) -> np.ndarray:
        adj = self.adjacency_masks()
        n = len(adj)
        out = np.zeros((n, n))
        for r, row in enumerate(adj):
            for c in range(n):
                if row >> c & 1:
                    out[r, c] = 1.0
        return out


@lru_cache(maxsize=128)
def _johnson_adj(m: int, k: int, i: int) -> tuple[int, ...]:
    masks = k_subset_masks(m, k)
    adj = [0] * len(masks)
    for a, x in enumerate(masks):
        for b in range(a + 1, len(masks)):
            if popcount(x ^ masks[b]) == 2 * i:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return tuple(adj)


# ---------------------------------------------------------------------------
# eigenvalues by formula

def s_term(m: int, k: int, c: int, j: int, i: int) -> int:
    """S^j_i = C(j,i) C(k-j,c-i) C(m-k-j,c-i)."""
    if m - k - j < 0 or k - j < 0 or c - i < 0:
        return 0
    return binomial(j, i) * binomial(k - j, c - i) * binomial(m - k - j, c - i)


def _check_eig_args(m, k, c, j):
    if not (0 <= j <= k and 2 * k <= m and 1 <= c <= k):
        raise DomainError(f"need 0 <= j <= k <= m/2 and 1 <= c <= k, got m={m}, k={k}, c={c}, j={j}")


def adjacency_eigenvalue_exact(m: int, k: int, c: int, j: int) -> int:
    _check_eig_args(m, k, c, j)
    return sum((-1) ** i * s_term(m, k, c, j, i) for i in range(c + 1))


def adjacency_eigenvalue(m: int, k: int, c: int, j: int) -> float:
    """Eigenvalue of J_c(m, k) on the j-th eigenspace (alternating sum of S^j_i)."""
    return float(adjacency_eigenvalue_exact(m, k, c, j))


def eigen_multiplicity(m: int, j: int) -> int:
    return binomial(m, j) - (binomial(m, j - 1) if j > 0 else 0)


def formula_spectrum(m: int, k: int, c: int) -> list[float]:
    """Formula eigenvalues repeated by multiplicity, sorted descending."""
    out = []
    for j in range(k + 1):
        out.extend([adjacency_eigenvalue(m, k, c, j)] * eigen_multiplicity(m, j))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class GapFormula:
    value: Fraction
    proven_regime: bool

    def __float__(self):
        return float(self.value)


def laplacian_gap_formula(m: int, k: int, c: int) -> GapFormula:
    """(m/k) C(k,c) C(m-k-1,c-1), flagged as proven only when k > 6c."""
    val = Fraction(m, k) * binomial(k, c) * binomial(m - k - 1, c - 1)
    return GapFormula(val, k > 6 * c)


# ---------------------------------------------------------------------------
# dense symmetric eigensolver

def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for a parallel cyclic sweep: n - 1 rounds of disjoint pairs covering all pairs."""
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for a in range(size // 2):
            p, q = players[a], players[size - 1 - a]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs that are rotated together.  Stops once the off-diagonal
    Frobenius norm drops below ``tol`` times the matrix norm (or 1).
    """
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError("expected a square matrix")
    if not np.allclose(a, a.T):
        raise ContractError("matrix is not symmetric")
    n = a.shape[0]
    if n <= 1:
        return np.sort(np.diag(a))
    scale = max(1.0, float(np.linalg.norm(a)))
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off < tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            cos = 1.0 / np.sqrt(t * t + 1.0)
            sin = t * cos
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = cos[:, None] * rp - sin[:, None] * rq
            a[q, :] = sin[:, None] * rp + cos[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * cos - cq * sin
            a[:, q] = cp * sin + cq * cos
            a[p, q] = 0.0
            a[q, p] = 0.0
    return np.sort(np.diag(a))


def dense_spectrum_oracle(m: int, k: int, c: int, budget: int = DENSE_BUDGET) -> list[float]:
    """Spectrum of J_c(m, k) from its dense adjacency matrix, sorted descending."""
    order = binomial(m, k)
    if order > budget:
        raise ResourceError(f"C({m},{k}) = {order} exceeds the dense budget {budget}")
    return list(_dense_spectrum(m, k, c))


@lru_cache(maxsize=128)
def _dense_spectrum(m: int, k: int, c: int) -> tuple[float, ...]:
    vals = jacobi_eigenvalues(JohnsonGraph(m, k, c).adjacency_matrix())
    return tuple(sorted(vals.tolist(), reverse=True))


def laplacian_gap_numeric(m: int, k: int, c: int, budget: int = DENSE_BUDGET) -> float:
    """Degree minus the second-largest adjacency eigenvalue (0 if disconnected)."""
    spec = dense_spectrum_oracle(m, k, c, budget)
    if len(spec) < 2:
        return 0.0
    return JohnsonGraph(m, k, c).degree - spec[1]


def spectral_gap(m: int, k: int, c: int) -> float:
    """The gap used by expansion bounds: the formula when proven, else a dense solve."""
    gf = laplacian_gap_formula(m, k, c)
    if gf.proven_regime:
        return float(gf.value)
    return laplacian_gap_numeric(m, k, c)


@dataclass(frozen=True)
class SpectrumReport:
    m: int
    k: int
    c: int
    formula_eigenvalues: tuple[int, ...]
    multiplicities: tuple[int, ...]
    s_table: tuple[tuple[int, ...], ...]
    numeric_eigenvalues: tuple[float, ...]
    laplacian_gap_formula: float
    proven_regime: bool
    laplacian_gap_numeric: float
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def multiset_error(self) -> float:
        expected = []
        for lam, mult in zip(self.formula_eigenvalues, self.multiplicities):
            expected.extend([lam] * mult)
        expected.sort(reverse=True)
        if len(expected) != len(self.numeric_eigenvalues):
            return math.inf
        return max(abs(a - b) for a, b in zip(expected, self.numeric_eigenvalues))


def spectrum_report(m: int, k: int, c: int, budget: int = DENSE_BUDGET) -> SpectrumReport:
    lams = tuple(adjacency_eigenvalue_exact(m, k, c, j) for j in range(k + 1))
    mults = tuple(eigen_multiplicity(m, j) for j in range(k + 1))
    table = tuple(tuple(s_term(m, k, c, j, i) for i in range(c + 1)) for j in range(k + 1))
    numeric = tuple(dense_spectrum_oracle(m, k, c, budget))
    arr = np.array(numeric)
    residuals = tuple(float(np.min(np.abs(arr - lam))) for lam in lams)
    gf = laplacian_gap_formula(m, k, c)
    degree = JohnsonGraph(m, k, c).degree
    return SpectrumReport(
        m=m, k=k, c=c, formula_eigenvalues=lams, multiplicities=mults, s_table=table,
        numeric_eigenvalues=numeric, laplacian_gap_formula=float(gf.value),
        proven_regime=gf.proven_regime,
        laplacian_gap_numeric=degree - numeric[1] if len(numeric) > 1 else 0.0,
        residuals=residuals,
    )


# ---------------------------------------------------------------------------
# edge boundaries

def _as_index_mask(m: int, k: int, family: Iterable) -> tuple[int, int]:
    ground = (1 << m) - 1
    vmask = 0
    count = 0
    for s in family:
        bits = s.bits if isinstance(s, KSubset) else int(s)
        if popcount(bits) != k or bits & ~ground:
            raise ContractError(f"{s!r} is not a {k}-subset of [{m}]")
        bit = 1 << rank_bits(bits)
        if not vmask & bit:
            count += 1
        vmask |= bit
    return vmask, count


def boundary_from_index_mask(adj: tuple[int, ...], vmask: int) -> int:
    total = 0
    outside = ~vmask
    v = 0
    rest = vmask
    while rest:
        if rest & 1:
            total += popcount(adj[v] & outside)
        rest >>= 1
        v += 1
    return total


def edge_boundary(m: int, k: int, i: int, family: Iterable) -> int:
    """Number of edges of J_i(m, k) with exactly one end in ``family``."""
    vmask, _ = _as_index_mask(m, k, family)
    return boundary_from_index_mask(_johnson_adj(m, k, i), vmask)


@dataclass(frozen=True)
class MarginReport:
    lhs: float
    rhs: float
    gap: float
    gap_source: str

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def check_alon_milman(m: int, k: int, c: int, family: Iterable, gap: float | None = None) -> MarginReport:
    """Both sides of beta_c(A) >= gap * |A| * (1 - mu(A))."""
    vmask, size = _as_index_mask(m, k, family)
    lhs = boundary_from_index_mask(_johnson_adj(m, k, c), vmask)
    if gap is None:
        gf = laplacian_gap_formula(m, k, c)
        if gf.proven_regime:
            gap, source = float(gf.value), "formula"
        else:
            gap, source = laplacian_gap_numeric(m, k, c), "numeric"
    else:
        source = "given"
    mu = size / binomial(m, k)
    return MarginReport(float(lhs), gap * size * (1.0 - mu), gap, source)


def log_sobolev_ratio(m: int, k: int, family: Iterable) -> float:
    """beta_1(A) / (m |A| log(1/mu(A))): the constant gamma attained by A."""
    vmask, size = _as_index_mask(m, k, family)
    total = binomial(m, k)
    if size == 0 or size == total:
        raise DomainError("log-Sobolev ratio needs a proper nonempty subset")
    beta = boundary_from_index_mask(_johnson_adj(m, k, 1), vmask)
    return beta / (m * size * math.log(total / size))

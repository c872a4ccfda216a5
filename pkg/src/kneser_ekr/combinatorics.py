"""Exact binomials, colex ranking and k-subset enumeration.

Subsets of the ground set ``[n] = {1, ..., n}`` are stored as bit vectors:
bit ``i - 1`` holds element ``i``.  The hot loops elsewhere in the package
work on the raw ``int`` masks; :class:`KSubset` is the public value type.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator

from .errors import ContractError, DomainError

MAX_GROUND = 64


def binomial(a: int, b: int) -> int:
    """C(a, b) as an exact integer; zero when ``b > a``."""
    if a < 0 or b < 0:
        raise DomainError(f"binomial needs nonnegative arguments, got ({a}, {b})")
    return comb(a, b)


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(elements: Iterable[int]) -> int:
    bits = 0
    for e in elements:
        if not 1 <= e <= MAX_GROUND:
            raise DomainError(f"element {e} outside 1..{MAX_GROUND}")
        bits |= 1 << (e - 1)
    return bits


def elements_of(bits: int) -> tuple[int, ...]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True, order=False)
class KSubset:
    """A subset of [n] held as a bit vector, with its cardinality cached."""

    bits: int
    size: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> MAX_GROUND:
            raise DomainError("KSubset supports ground sets of at most 64 elements")
        if popcount(self.bits) != self.size:
            raise ContractError("cached size disagrees with popcount")

    @classmethod
    def of(cls, *elements: int) -> "KSubset":
        if len(elements) == 1 and not isinstance(elements[0], int):
            elements = tuple(elements[0])
        bits = mask_of(elements)
        return cls(bits, popcount(bits))

    @classmethod
    def from_bits(cls, bits: int) -> "KSubset":
        return cls(bits, popcount(bits))

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.bits)

    @property
    def max_element(self) -> int:
        return self.bits.bit_length()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> (x - 1) & 1) if x >= 1 else False

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def colex_less(a: KSubset, b: KSubset) -> bool:
    """Colex comparison: the larger set is the one whose largest differing element is larger."""
    diff = a.bits ^ b.bits
    if not diff:
        return False
    top = diff.bit_length() - 1
    return bool(b.bits >> top & 1)


def rank_bits(bits: int) -> int:
    r = 0
    i = 1
    pos = 0
    while bits:
        if bits & 1:
            r += comb(pos, i)
            i += 1
        bits >>= 1
        pos += 1
    return r


def colex_rank(s: KSubset) -> int:
    """Sum of C(s_i - 1, i) over the sorted elements s_1 < ... < s_k."""
    return rank_bits(s.bits)


def unrank_bits(r: int, k: int) -> int:
    bits = 0
    for i in range(k, 0, -1):
        # largest c with C(c, i) <= r
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        r -= comb(c, i)
        bits |= 1 << c
    return bits


def colex_unrank(r: int, k: int, n: int | None = None) -> KSubset:
    """Inverse of :func:`colex_rank` for subsets of size ``k``.

    ``n`` is optional; when given, ranks at or beyond C(n, k) are rejected.
    """
    if r < 0 or k < 0:
        raise DomainError("rank and size must be nonnegative")
    if n is not None and r >= comb(n, k):
        raise DomainError(f"rank {r} out of range for C({n},{k})")
    if k == 0:
        if r != 0:
            raise DomainError("the empty set has rank 0 only")
        return KSubset(0, 0)
    bits = unrank_bits(r, k)
    if bits >> MAX_GROUND:
        raise DomainError("rank exceeds the 64-element ground set")
    return KSubset(bits, k)


def k_subset_masks(n: int, k: int) -> list[int]:
    """All k-subsets of [n] as masks, in colex order (Gosper's hack)."""
    if n > MAX_GROUND:
        raise DomainError(f"n={n} exceeds {MAX_GROUND}")
    if k > n or k < 0:
        return []
    if k == 0:
        return [0]
    out = []
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        out.append(x)
        lowest = x & -x
        ripple = x + lowest
        x = (((ripple ^ x) >> 2) // lowest) | ripple
    return out


def enumerate_k_subsets(n: int, k: int) -> list[KSubset]:
    return [KSubset(b, k) for b in k_subset_masks(n, k)]


def sym_diff_half(a: KSubset, b: KSubset) -> int:
    if a.size != b.size:
        raise ContractError("sym_diff_half needs equal-size sets")
    return popcount(a.bits ^ b.bits) // 2


def compress_mask(bits: int, x: int) -> int:
    """Drop element ``x`` from the ground set, shifting larger elements down by one."""
    low = bits & ((1 << (x - 1)) - 1)
    high = bits >> x
    return low | (high << (x - 1))


def expand_mask(bits: int, x: int) -> int:
    """Inverse of :func:`compress_mask` (the result never contains ``x``)."""
    low = bits & ((1 << (x - 1)) - 1)
    high = bits >> (x - 1)
    return low | (high << x)

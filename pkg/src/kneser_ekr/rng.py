"""Counter-based 64-bit mixing (splitmix64 finaliser) for storage-free randomness."""

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def keyed_hash(seed: int, *words: int) -> int:
    h = splitmix64(seed & MASK64)
    for w in words:
        h = splitmix64(h ^ (w & MASK64))
    return h


def to_unit(h: int) -> float:
    """Top 53 bits of ``h`` as a float in [0, 1)."""
    return (h >> 11) * (1.0 / (1 << 53))


def keyed_uniform(seed: int, *words: int) -> float:
    return to_unit(keyed_hash(seed, *words))


def sub_seed(seed: int, counter: int) -> int:
    return keyed_hash(seed, 0x5EED, counter)

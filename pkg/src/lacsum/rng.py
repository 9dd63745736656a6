"""Counter-based random streams for reproducible, scheduling-independent sampling.

Every chunk of draws is generated by a Philox generator keyed by
(seed, stream tag, chunk index), so the sample stream depends only on the
chunk partition, never on which worker produced it.

Stream tags keep independent uses of the same seed apart:
  0  uniform theta draws (norms + clt sampling share this stream)
  1  the smoothing Gaussian Z
  2  the reference Gaussian Y
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

STREAM_THETA = 0
STREAM_Z = 1
STREAM_Y = 2

_MASK63 = np.uint64(2**63 - 1)


def generator_for(seed: int, stream: int, chunk: int) -> Generator:
    key = np.array(
        [np.uint64(seed & (2**64 - 1)), np.uint64((stream << 56) ^ chunk)],
        dtype=np.uint64,
    )
    return Generator(Philox(key=key))


def chunk_uniform63(seed: int, stream: int, chunk: int, count: int) -> np.ndarray:
    """count dyadic numerators m, theta = m / 2^63, uniform on [0,1)."""
    rg = generator_for(seed, stream, chunk)
    return rg.integers(0, 1 << 63, size=count, dtype=np.uint64)


def chunk_gaussian_pairs(seed: int, stream: int, chunk: int, count: int, sigma: float) -> np.ndarray:
    """count iid N(0, sigma^2) pairs, shape (count, 2)."""
    rg = generator_for(seed, stream, chunk)
    return sigma * rg.standard_normal((count, 2))


def chunk_layout(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Fixed partition of `total` draws into (chunk index, count) pieces."""
    if total <= 0:
        return []
    nchunks = (total + chunk_size - 1) // chunk_size
    return [
        (c, min(chunk_size, total - c * chunk_size))
        for c in range(nchunks)
    ]

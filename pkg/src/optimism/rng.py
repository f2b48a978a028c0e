"""Counter-based random streams with explicit substream addressing.

Every draw in this package is addressed by a (master_seed, substream) pair.
A stream's output is a pure function of that pair, so replicate r of a
simulation can be regenerated in isolation, batches of replicates can be
produced in any grouping, and thread count cannot change results.

The generator is Philox4x64-10 keyed as key = [master_seed, substream],
evaluated here for many substreams at once.  Output is bit-identical to

    numpy.random.Generator(numpy.random.Philox(key=[master_seed, substream]))

for ``random()`` draws (numpy advances the counter before the first block,
so block k of the output uses counter value k+1).

Normal deviates use a fixed inverse-CDF transform of one 64-bit word each:
``ndtri(((word >> 12) + 0.5) * 2**-52)``.  The argument is strictly inside
(0, 1), so the transform never produces infinities.  This does not match
numpy's ziggurat normals; it is pinned here so that normal draws are part of
the package's determinism contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

# Philox4x64 round constants (multipliers and Weyl key increments).
_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)

_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)

_U53_INV = 1.0 / 9007199254740992.0  # 2**-53
_U52_INV = 1.0 / 4503599627370496.0  # 2**-52


def _u64(value) -> np.uint64:
    # int() first: casting large Python ints through np.asarray goes via
    # float64 and corrupts the top bits.
    return np.uint64(int(value) & 0xFFFFFFFFFFFFFFFF)


def _u64_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == np.uint64:
        return arr
    return np.asarray([int(v) & 0xFFFFFFFFFFFFFFFF for v in arr.ravel()],
                      dtype=np.uint64).reshape(arr.shape)


def _mulhilo(a: np.uint64, b: np.ndarray):
    """Full 64x64 -> 128 bit product, returned as (high, low) words."""
    lo = a * b
    a_lo = a & _MASK32
    a_hi = a >> _S32
    b_lo = b & _MASK32
    b_hi = b >> _S32
    t = a_lo * b_lo
    carry = t >> _S32
    t = a_hi * b_lo + carry
    w1 = t & _MASK32
    w2 = t >> _S32
    t = a_lo * b_hi + w1
    carry = t >> _S32
    hi = a_hi * b_hi + w2 + carry
    return hi, lo


def _philox_block(key0: np.ndarray, key1: np.ndarray, ctr0: np.ndarray):
    """Ten Philox rounds on counter [ctr0, 0, 0, 0]; returns 4 output words."""
    c0 = ctr0.copy()
    c1 = np.zeros_like(c0)
    c2 = np.zeros_like(c0)
    c3 = np.zeros_like(c0)
    k0 = np.broadcast_to(key0, c0.shape).copy()
    k1 = np.broadcast_to(key1, c0.shape).copy()
    for _ in range(10):
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    return c0, c1, c2, c3


def stream_words(master_seed, substreams, n_words: int) -> np.ndarray:
    """Raw 64-bit words for many substreams of one master seed.

    Returns a (len(substreams), n_words) uint64 array.  Row i holds the
    first n_words outputs of the stream keyed [master_seed, substreams[i]].
    """
    subs = np.atleast_1d(_u64_array(substreams))
    m = subs.shape[0]
    if n_words <= 0 or m == 0:
        return np.empty((m, max(n_words, 0)), dtype=np.uint64)
    n_blocks = -(-n_words // 4)
    # numpy pre-increments: output block k comes from counter k+1.
    counters = np.arange(1, n_blocks + 1, dtype=np.uint64)
    ctr = np.broadcast_to(counters, (m, n_blocks))
    k0 = np.full((m, 1), _u64(master_seed), dtype=np.uint64)
    k1 = subs[:, None]
    c0, c1, c2, c3 = _philox_block(k0, k1, np.ascontiguousarray(ctr))
    words = np.stack([c0, c1, c2, c3], axis=-1).reshape(m, 4 * n_blocks)
    return words[:, :n_words]


def uniforms(master_seed, substreams, n: int) -> np.ndarray:
    """Uniform [0, 1) doubles, matching numpy's Philox generator bit for bit."""
    words = stream_words(master_seed, substreams, n)
    return (words >> np.uint64(11)).astype(np.float64) * _U53_INV


def normals(master_seed, substreams, n: int) -> np.ndarray:
    """Standard normal deviates via the pinned inverse-CDF transform."""
    words = stream_words(master_seed, substreams, n)
    u = ((words >> np.uint64(12)).astype(np.float64) + 0.5) * _U52_INV
    return ndtri(u)


def derive_seed(master_seed, tag) -> int:
    """A new 64-bit master seed taken from stream (master_seed, tag).

    Used for nested randomness (for example per-trial problem instances)
    without touching the replicate substream range.
"""
    return int(stream_words(master_seed, [tag], 1)[0, 0])


@dataclass(frozen=True)
class RngStream:
    """One addressed stream: scalar view of the block functions above."""

    master_seed: int
    substream: int = 0

    def uniforms(self, n: int) -> np.ndarray:
        return uniforms(self.master_seed, [self.substream], n)[0]

    def normals(self, n: int) -> np.ndarray:
        return normals(self.master_seed, [self.substream], n)[0]

    def derive(self, tag) -> "RngStream":
        return RngStream(derive_seed(self.master_seed, tag), 0)

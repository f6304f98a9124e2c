"""Counter-based Gaussian noise.

Every draw is a pure function of ``(seed, counter)``, so noise for entry
``(n, p)`` never depends on how many other entries were generated or in
what order. The uniform source is the SplitMix64 finalizer applied to
``seed + (counter + 1) * 0x9E3779B97F4A7C15`` (mod 2**64); the top 53 bits
become a uniform in (0, 1]; Box-Muller turns pairs of uniforms (counters
``2i`` and ``2i + 1``) into one standard complex Gaussian whose real and
imaginary parts are independent N(0, 1).
"""
from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def splitmix64(seed: int, counters) -> np.ndarray:
    """SplitMix64 output for each counter of the stream keyed by ``seed``."""
    ctr = np.asarray(counters, dtype=np.uint64)
    base = np.uint64(int(seed) & _MASK64)
    with np.errstate(over="ignore"):
        z = base + (ctr + np.uint64(1)) * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform01(seed: int, counters) -> np.ndarray:
    """Uniform doubles in (0, 1] from the top 53 bits."""
    bits = splitmix64(seed, counters) >> np.uint64(11)
    return (bits.astype(np.float64) + 1.0) * 2.0**-53


def complex_normal(seed: int, index) -> np.ndarray:
    """Standard complex Gaussian (unit variance per component) per index."""
    idx = np.asarray(index, dtype=np.uint64)
    u1 = uniform01(seed, np.uint64(2) * idx)
    u2 = uniform01(seed, np.uint64(2) * idx + np.uint64(1))
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    return rad * np.cos(ang) + 1j * rad * np.sin(ang)

"""Counter-based uniform streams built on the SplitMix64 finalizer.

A draw is a pure function of ``(seed, index)``: the index is added to the
seed as a multiple of the golden-ratio increment and the sum is run through
the SplitMix64 mixer. Streams are therefore reproducible across platforms
and numpy versions, prefix-stable (the first ``n`` draws never depend on
how many are requested) and splittable via :func:`derive_seed`.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def splitmix64(seed, index):
    """Mix ``(seed, index)`` into a 64-bit word. Both arguments may be arrays."""
    s = np.asarray(np.uint64(int(seed) & _MASK64))
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = s + (idx + np.uint64(1)) * _GOLDEN
        return _mix(np.atleast_1d(z))


def uniforms(seed, n, offset=0):
    """``n`` doubles in the open interval (0, 1) for draw indices offset..offset+n-1."""
    if n == 0:
        return np.empty(0)
    words = splitmix64(seed, np.arange(offset, offset + n, dtype=np.uint64))
    # 53 high bits, shifted by half an ulp so 0 and 1 are never produced
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def derive_seed(master_seed, *path):
    """Child seed for a position ``path`` (e.g. replicate number) under ``master_seed``."""
    s = int(master_seed) & _MASK64
    for p in path:
        s = int(splitmix64(s, int(p))[0])
    return s

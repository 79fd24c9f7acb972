"""Pure-numpy implementations of the chunking hot kernels.

Drop-in fallback for the compiled extension: same two entry points, same
semantics.  Sliding-window statistics come from cumulative sums, so the
master scan stays O(n * n_sizes) even on signals with no periodic structure.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve

_BLOCK = 16384


def _counted_corr(cross, sx, sy, sxx, syy, L):
    vx = sxx - sx * sx / L
    vy = syy - sy * sy / L
    num = cross - sx * sy / L
    denom = np.sqrt(np.clip(vx, 0.0, None) * np.clip(vy, 0.0, None))
    out = np.zeros_like(num)
    good = denom > 0
    out[good] = num[good] / denom[good]
    return np.clip(out, -1.0, 1.0)


def scan_master(env: np.ndarray, sizes: np.ndarray, L: int, T: float):
    """First position p where some size j in `sizes` makes env[p:p+L] and
    env[p+j:p+j+L] correlate above T.  Returns (p, j) or (-1, -1)."""
    env = np.ascontiguousarray(env, dtype=np.float64)
    n = len(env)
    max_j = int(sizes.max())
    p_last = n - max_j - L
    if p_last < 0:
        return -1, -1

    c1 = np.concatenate(([0.0], np.cumsum(env)))
    c2 = np.concatenate(([0.0], np.cumsum(env * env)))
    cz = {}
    for j in sizes:
        j = int(j)
        prod = env[: n - j] * env[j:]
        cz[j] = np.concatenate(([0.0], np.cumsum(prod)))

    for b0 in range(0, p_last + 1, _BLOCK):
        b1 = min(b0 + _BLOCK, p_last + 1)
        p = np.arange(b0, b1)
        sx = c1[p + L] - c1[p]
        sxx = c2[p + L] - c2[p]
        block = np.empty((len(sizes), b1 - b0))
        for k, j in enumerate(sizes):
            j = int(j)
            q = p + j
            sy = c1[q + L] - c1[q]
            syy = c2[q + L] - c2[q]
            cross = cz[j][p + L] - cz[j][p]
            block[k] = _counted_corr(cross, sx, sy, sxx, syy, L)
        best = block.max(axis=0)
        hits = np.nonzero(best > T)[0]
        if len(hits):
            i = int(hits[0])
            return b0 + i, int(sizes[int(np.argmax(block[:, i]))])
    return -1, -1


def range_corr(env: np.ndarray, off0: int, count: int, L: int, ref_z: np.ndarray):
    """Pearson of the standardized reference (mean 0, unit norm, length L)
    against env[off:off+L] for each offset in [off0, off0+count)."""
    env = np.ascontiguousarray(env, dtype=np.float64)
    span = env[off0:off0 + count - 1 + L]
    c1 = np.concatenate(([0.0], np.cumsum(span)))
    c2 = np.concatenate(([0.0], np.cumsum(span * span)))
    k = np.arange(count)
    sx = c1[k + L] - c1[k]
    sxx = c2[k + L] - c2[k]
    vx = np.clip(sxx - sx * sx / L, 0.0, None)
    if count >= 64:
        cross = fftconvolve(span, ref_z[::-1], mode="valid")
    else:
        cross = np.array([ref_z.dot(env[off0 + i:off0 + i + L]) for i in range(count)])
    denom = np.sqrt(vx)
    out = np.zeros(count)
    good = denom > 0
    out[good] = cross[good] / denom[good]
    return np.clip(out, -1.0, 1.0)

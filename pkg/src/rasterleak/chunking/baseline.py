"""Naive chunking baseline: fixed-rate segmentation plus per-chunk rotational
alignment to an arbitrary master.

Kept deliberately naive - Pearson evaluated at every rotational shift - both
as the comparison point for output quality and because its run time is part
of the comparison.  Do not "optimize" this with FFT correlation: the cost gap
to chunkify is a measured claim.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParamError
from ..signal import SampledSignal
from .algorithm import ChunkSet

REJECT_BELOW = 0.05


def baseline_chunkify(signal: SampledSignal, refresh_rate_hz: float) -> ChunkSet:
    """Segment at the exact given refresh rate, rotate every chunk to its
    best correlation against the first chunk, drop chunks correlating below
    0.05."""
    if refresh_rate_hz <= 0:
        raise ParamError("refresh rate must be positive")
    env = signal.samples
    period = signal.sample_rate_hz / refresh_rate_hz
    chunk_len = int(period)
    if chunk_len < 2 or len(env) < 2 * chunk_len:
        raise ParamError("signal shorter than two cycles")

    starts = []
    k = 0
    while True:
        s = int(round(k * period))
        if s + chunk_len > len(env):
            break
        starts.append(s)
        k += 1

    master = env[starts[0]:starts[0] + chunk_len]
    mz = master - master.mean()
    mnorm = np.sqrt(mz.dot(mz))
    if mnorm > 0:
        mz = mz / mnorm

    chunks = [master]
    kept_starts = [starts[0]]
    corrs = [1.0]
    for s in starts[1:]:
        chunk = env[s:s + chunk_len]
        doubled = np.concatenate([chunk, chunk[:-1]])
        cz = chunk - chunk.mean()
        cnorm = np.sqrt(cz.dot(cz))
        best_corr = -2.0
        best_shift = 0
        if cnorm > 0 and mnorm > 0:
            # Pearson at every rotational shift, one dot product per shift
            # (mz has zero mean, so the chunk mean drops out).
            for shift in range(chunk_len):
                window = doubled[shift:shift + chunk_len]
                c = mz.dot(window) / cnorm
                if c > best_corr:
                    best_corr = c
                    best_shift = shift
        else:
            best_corr = 0.0
        if best_corr < REJECT_BELOW:
            continue
        chunks.append(np.roll(chunk, -best_shift))
        kept_starts.append(s)
        corrs.append(min(1.0, best_corr))

    return ChunkSet(np.array(chunks), np.array(kept_starts, dtype=np.int64),
                    np.array(corrs), 0, len(starts), signal.sample_rate_hz)

"""Refresh-cycle chunking robust to drift, jitter, and abnormal cycles.

The segmentation walks the demodulated envelope one cycle at a time.  Chunk
sizes are drawn from the narrow window G = [S-d-1, S+d]; the next size is the
one whose *following* chunk correlates best with the master chunk, which
absorbs one-sample drift without ever re-aligning leniently.  When the
current chunk itself stops correlating with the master, the walker drops into
sync mode and searches sizes [S, S+sync_window] until the phase re-locks,
appending nothing meanwhile.  A walker that spends too long in sync mode
(more than `max_sync_runs` consecutive searches, or more than
`max_sync_fraction` of all iterations) aborts: the signal is too noisy to
trust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dsp import pearson
from ..errors import DegenerateSetError, NoMasterError, ParamError, SyncBudgetError
from ..signal import SampledSignal
from ._backend import get_backend


@dataclass(frozen=True)
class ChunkParams:
    S: int                        # upper bound on the normal cycle length, in samples
    d: int = 1                    # allowed drift; sizes come from [S-d, S+d]
    T: float = 0.9                # correlation threshold
    sync_window: int = 6000
    max_sync_runs: int = 3
    max_sync_fraction: float = 0.15

    def __post_init__(self):
        if not 1 <= self.d <= 3:
            raise ParamError("d must be in [1, 3]")
        if not 0.05 <= self.T <= 0.95:
            raise ParamError("T must be in [0.05, 0.95]")
        if self.S - self.d < 2:
            raise ParamError("S too small for the drift window")
        if self.sync_window < 1 or self.max_sync_runs < 1:
            raise ParamError("sync parameters must be positive")

    @property
    def sizes(self) -> np.ndarray:
        # Non-abnormal cycles are always S-1, S, or S+1 samples, so the
        # symmetric size window covers them at d = 1 while staying tight
        # enough that a candidate one step off pays a visible score penalty.
        return np.arange(self.S - self.d, self.S + self.d + 1, dtype=np.int64)


@dataclass(frozen=True)
class ChunkSet:
    """Equal-length cycle chunks; chunks[master_index] is the reference."""

    chunks: np.ndarray          # (n_chunks, chunk_len)
    boundaries: np.ndarray      # start sample of each chunk, strictly increasing
    corrs: np.ndarray           # correlation with the master at accept time
    sync_iterations: int
    total_iterations: int
    sample_rate_hz: float
    master_index: int = 0


@dataclass(frozen=True)
class OutputTrace:
    """One refresh cycle's averaged envelope, rotated so values[0] is the max."""

    values: np.ndarray
    source_count: int
    sample_rate_hz: float


def chunkify(signal: SampledSignal, params: ChunkParams, backend: str | None = None) -> ChunkSet:
    env = np.ascontiguousarray(signal.samples, dtype=np.float64)
    n = len(env)
    if n < 3 * (params.S + params.d):
        raise ParamError("signal shorter than three cycles")
    kern = get_backend(backend)
    sizes = params.sizes
    L = int(sizes[0])  # lookahead length: min{G}, always in-bounds near the end
    T = params.T

    pos, msize = kern.scan_master(env, sizes, L, T)
    if pos < 0:
        raise NoMasterError("no consecutive above-threshold chunk pair found")

    ref = env[pos:pos + L]
    ref_z = ref - ref.mean()
    norm = math.sqrt(float(ref_z.dot(ref_z)))
    if norm == 0.0:  # cannot happen after a successful scan, but stay safe
        raise NoMasterError("degenerate master chunk")
    ref_z = ref_z / norm

    chunks = [env[pos:pos + msize]]
    boundaries = [pos]
    corrs = [1.0]
    p = pos + msize
    max_size = int(sizes[-1])
    state = "normal"
    consec_sync = 0
    sync_total = 0
    iters = 0

    while True:
        if state == "normal":
            if p + max_size + L > n:
                break
            following = kern.range_corr(env, p + int(sizes[0]), len(sizes), L, ref_z)
            j = int(sizes[int(np.argmax(following))])
            cur = float(kern.range_corr(env, p, 1, L, ref_z)[0])
            iters += 1
            if cur > T:
                chunks.append(env[p:p + j])
                boundaries.append(p)
                corrs.append(cur)
            else:
                state = "sync"
            p += j
        else:
            count = n - L - (p + params.S) + 1
            if count < params.sync_window + 1:
                break  # not enough signal left for a full re-sync search
            count = params.sync_window + 1
            following = kern.range_corr(env, p + params.S, count, L, ref_z)
            iters += 1
            sync_total += 1
            consec_sync += 1
            k = int(np.argmax(following))
            locked = following[k] >= T
            if locked:
                state = "normal"
                consec_sync = 0
            elif consec_sync >= params.max_sync_runs:
                raise SyncBudgetError(
                    f"no re-lock after {consec_sync} sync searches")
            p += params.S + k

    if iters and sync_total > params.max_sync_fraction * iters:
        raise SyncBudgetError(
            f"{sync_total}/{iters} iterations spent in sync mode")

    min_len = min(len(c) for c in chunks)
    return ChunkSet(
        chunks=np.array([c[:min_len] for c in chunks]),
        boundaries=np.array(boundaries, dtype=np.int64),
        corrs=np.array(corrs),
        sync_iterations=sync_total,
        total_iterations=iters,
        sample_rate_hz=signal.sample_rate_hz,
    )


def outlier_reject(cs: ChunkSet) -> ChunkSet:
    """Drop the 10% of chunks correlating worst with the master, then any
    chunk peaking above 1.5x the mean per-chunk peak.  The master survives."""
    n = len(cs.chunks)
    if n < 2:
        raise ParamError("outlier rejection needs at least 2 chunks")
    master = cs.chunks[cs.master_index]
    corr = np.array([pearson(master, c) for c in cs.chunks])

    k = math.ceil(0.10 * n)
    candidates = [i for i in range(n) if i != cs.master_index]
    candidates.sort(key=lambda i: (corr[i], i))
    removed = set(candidates[:k])
    kept = [i for i in range(n) if i not in removed]

    peaks = cs.chunks[kept].max(axis=1)
    limit = 1.5 * peaks.mean()
    kept = [i for i, pk in zip(kept, peaks)
            if i == cs.master_index or pk <= limit]

    if kept == [cs.master_index]:
        raise DegenerateSetError("all non-master chunks rejected")
    new_master = kept.index(cs.master_index)
    return ChunkSet(
        chunks=cs.chunks[kept],
        boundaries=cs.boundaries[kept],
        corrs=corr[kept],
        sync_iterations=cs.sync_iterations,
        total_iterations=cs.total_iterations,
        sample_rate_hz=cs.sample_rate_hz,
        master_index=new_master,
    )


def average_chunks(cs: ChunkSet) -> OutputTrace:
    """Sample-wise mean, rotated so the highest value comes first."""
    if len(cs.chunks) < 1:
        raise ParamError("nothing to average")
    avg = cs.chunks.mean(axis=0)
    return OutputTrace(np.roll(avg, -int(np.argmax(avg))), len(cs.chunks),
                       cs.sample_rate_hz)


def probe_chunkset(signal: SampledSignal, cycle_starts: np.ndarray) -> ChunkSet:
    """Ground-truth segmentation from simulator cycle starts (the vsync-probe
    stand-in); chunks truncated to the shortest cycle."""
    starts = np.asarray(cycle_starts, dtype=np.int64)
    n = len(signal.samples)
    if len(starts) < 2:
        raise ParamError("need at least two cycle starts")
    lengths = np.diff(starts)
    min_len = int(lengths.min())
    keep = [int(s) for s in starts[:-1] if s + min_len <= n]
    chunks = np.array([signal.samples[s:s + min_len] for s in keep])
    master = chunks[0]
    corrs = np.array([pearson(master, c) for c in chunks])
    return ChunkSet(chunks, np.array(keep, dtype=np.int64), corrs, 0, len(keep),
                    signal.sample_rate_hz)


def probe_average(signal: SampledSignal, cycle_starts: np.ndarray) -> np.ndarray:
    """Ground-truth chunk average with no rotation normalization; keeps the
    cycle phase as captured, which preserves channel delays."""
    return probe_chunkset(signal, cycle_starts).chunks.mean(axis=0)


def mean_chunk_correlation(cs: ChunkSet) -> float:
    """Average Pearson correlation between each chunk and the chunk mean; the
    trace-quality figure of merit."""
    mean = cs.chunks.mean(axis=0)
    return float(np.mean([pearson(c, mean) for c in cs.chunks]))

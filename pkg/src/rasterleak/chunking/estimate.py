"""Brute-force recovery of the cycle-length parameter S from recordings.

Each candidate S' is scored by running the chunker on every signal:

    score = (sum of accepted-chunk correlations - T * sync iterations)
            / total iterations

(0 for runs that error out), averaged over the signals.  Because d = 1 makes
adjacent candidates nearly equivalent, the winner is the candidate whose
{S'-1, S', S'+1} neighborhood has the best mean score.
"""

from __future__ import annotations

import numpy as np

from ..errors import EstimationError, RasterleakError
from .algorithm import ChunkParams, chunkify


def score_candidate(signal, s_value: int, d: int, T: float,
                    backend: str | None = None) -> float | None:
    """One signal's score for one candidate; None when chunking fails."""
    try:
        cs = chunkify(signal, ChunkParams(S=s_value, d=d, T=T), backend=backend)
    except RasterleakError:
        return None
    if cs.total_iterations == 0:
        return None
    appended = cs.corrs[1:].sum()  # master excluded: its self-correlation is free
    return float((appended - T * cs.sync_iterations) / cs.total_iterations)


def find_s(signals, candidates, d: int = 1, T: float = 0.9,
           backend: str | None = None) -> int:
    """Return the candidate S maximizing the neighborhood-mean score."""
    signals = list(signals)
    candidates = sorted(int(c) for c in candidates)
    if not signals or not candidates:
        raise EstimationError("need at least one signal and one candidate")

    scores = {}
    any_success = False
    for s_value in candidates:
        per_signal = []
        for sig in signals:
            sc = score_candidate(sig, s_value, d, T, backend=backend)
            if sc is None:
                per_signal.append(0.0)
            else:
                per_signal.append(sc)
                any_success = True
        scores[s_value] = float(np.mean(per_signal))
    if not any_success:
        raise EstimationError("chunking failed for every candidate on every signal")

    best_s = None
    best_score = -np.inf
    for s_value in candidates:
        hood = [scores[v] for v in (s_value - 1, s_value, s_value + 1) if v in scores]
        mean_score = float(np.mean(hood))
        if mean_score > best_score + 1e-12:
            best_s, best_score = s_value, mean_score
    return best_s

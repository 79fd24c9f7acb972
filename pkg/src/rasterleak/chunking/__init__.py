"""Cycle chunking, averaging, and the naive baseline."""

from ._backend import DEFAULT_BACKEND, available_backends, get_backend
from .algorithm import (ChunkParams, ChunkSet, OutputTrace, average_chunks, chunkify,
                        mean_chunk_correlation, outlier_reject, probe_average,
                        probe_chunkset)
from .baseline import baseline_chunkify
from .estimate import find_s, score_candidate
from .pipeline import (CARRIER_BAND, demod_chunks, preprocess, read_output_trace,
                       write_output_trace)

__all__ = [
    "DEFAULT_BACKEND", "available_backends", "get_backend",
    "ChunkParams", "ChunkSet", "OutputTrace", "average_chunks", "chunkify",
    "mean_chunk_correlation", "outlier_reject", "probe_average", "probe_chunkset",
    "baseline_chunkify", "find_s", "score_candidate",
    "CARRIER_BAND", "demod_chunks", "preprocess", "read_output_trace",
    "write_output_trace",
]

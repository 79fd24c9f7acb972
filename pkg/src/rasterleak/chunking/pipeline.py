"""End-to-end trace preprocessing and OutputTrace serialization."""

from __future__ import annotations

import numpy as np

from ..dsp import demodulate
from ..errors import FormatError, IoError, ParamError
from ..signal import SampledSignal
from .algorithm import ChunkParams, ChunkSet, OutputTrace, average_chunks, chunkify, outlier_reject

CARRIER_BAND = (27500.0, 38000.0)


def preprocess(signal: SampledSignal, params: ChunkParams,
               carrier_band: tuple = CARRIER_BAND,
               backend: str | None = None) -> OutputTrace:
    """Carrier band-pass, AM demodulation, chunking, outlier rejection, and
    sample-wise averaging: raw recording in, one clean cycle out."""
    lo, hi = carrier_band
    if signal.sample_rate_hz < 2 * hi:
        raise ParamError("sample rate below twice the carrier band top")
    env = demodulate(signal, lo, hi)
    cs = chunkify(env, params, backend=backend)
    cs = outlier_reject(cs)
    return average_chunks(cs)


def demod_chunks(signal: SampledSignal, params: ChunkParams,
                 carrier_band: tuple = CARRIER_BAND,
                 backend: str | None = None) -> ChunkSet:
    """The chunk set preprocess() averages, for quality inspection."""
    lo, hi = carrier_band
    if signal.sample_rate_hz < 2 * hi:
        raise ParamError("sample rate below twice the carrier band top")
    env = demodulate(signal, lo, hi)
    return outlier_reject(chunkify(env, params, backend=backend))


def write_output_trace(trace: OutputTrace, path) -> None:
    """Single-column CSV with a two-line header (sample rate, source count)."""
    lines = [f"sample_rate_hz,{trace.sample_rate_hz!r}",
             f"source_count,{trace.source_count}"]
    lines += [repr(float(v)) for v in trace.values]
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_output_trace(path) -> OutputTrace:
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        rate = float(lines[0].split(",", 1)[1])
        count = int(lines[1].split(",", 1)[1])
        values = np.array([float(x) for x in lines[2:] if x.strip()])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"{path}: malformed output trace") from exc
    return OutputTrace(values, count, rate)

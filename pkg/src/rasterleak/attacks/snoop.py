"""Keyboard snooping: sliding-window classification plus dictionary matching.

A 0.5 s window slides across the typing trace in one-refresh-cycle steps;
every window is preprocessed and classified on its own, producing one group
label per offset (or a skipped sentinel when preprocessing fails).  Labels
that persist for at least `runlen_min` consecutive windows survive; each
surviving run collapses to a single symbol.  Dictionary words whose expected
label sequence equals the observed one form the prediction list.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..chunking import CARRIER_BAND, ChunkParams, preprocess
from ..classify import align_to_reference, predict_proba, trace_features
from ..errors import ParamError, RasterleakError
from ..signal import SampledSignal
from .keyboard import ClassGrouping

SKIPPED = None  # sentinel label for windows whose preprocessing failed


@dataclass(frozen=True)
class PredictionList:
    candidates: list          # (word, score), scores non-increasing
    query_trace_id: str = ""

    def words(self) -> list:
        return [w for w, _ in self.candidates]


def window_labels(signal: SampledSignal, model, chunk_params: ChunkParams,
                  window_s: float = 0.5, stride_samples: int | None = None,
                  carrier_band: tuple = CARRIER_BAND, feature_len: int = 3200,
                  align_ref: np.ndarray | None = None,
                  backend: str | None = None) -> list:
    """Per-window classified labels; failed windows yield the SKIPPED
    sentinel.  Array length is 60*l - 30 (+1) for an l-second trace at the
    nominal 192 kHz / 60 Hz configuration."""
    fs = signal.sample_rate_hz
    win = int(round(window_s * fs))
    if stride_samples is None:
        stride_samples = int(round(fs / 60.0))
    if len(signal.samples) < win:
        raise ParamError("trace shorter than the analysis window")
    labels = []
    for start in range(0, len(signal.samples) - win + 1, stride_samples):
        sub = SampledSignal(signal.samples[start:start + win], fs)
        try:
            trace = preprocess(sub, chunk_params, carrier_band, backend=backend)
        except RasterleakError:
            labels.append(SKIPPED)
            continue
        feats = trace_features(trace.values, feature_len)
        if align_ref is not None:
            feats = align_to_reference(align_ref, feats)
        probs = predict_proba(model, feats)
        labels.append(model.label_names[int(np.argmax(probs))])
    return labels


def collapse_labels(labels: list, runlen_min: int) -> list:
    """Keep labels running for at least runlen_min consecutive windows and
    collapse each run to one symbol.  Skipped windows are transparent: they
    neither extend nor break a run."""
    runs = []
    for label in labels:
        if label is SKIPPED:
            continue
        if runs and runs[-1][0] == label:
            runs[-1][1] += 1
        else:
            runs.append([label, 1])
    out = []
    for label, count in runs:
        if count >= runlen_min and (not out or out[-1] != label):
            out.append(label)
    return out


def snoop_stream(signal: SampledSignal, model, grouping: ClassGrouping,
                 chunk_params: ChunkParams, runlen_min: int = 35,
                 **window_kwargs) -> list:
    """Recover the collapsed group-label sequence typed during the trace."""
    if set(model.label_names) != set(grouping.groups):
        raise ParamError("model classes do not match the grouping")
    labels = window_labels(signal, model, chunk_params, **window_kwargs)
    return collapse_labels(labels, runlen_min)


def expected_word_trace(word: str, grouping: ClassGrouping) -> list:
    """Group-label sequence a word should produce, adjacent duplicates
    collapsed."""
    out = []
    for ch in word.lower():
        idx = grouping.key_to_group.get(ch)
        if idx is None:
            raise ParamError(f"character {ch!r} not on the keyboard")
        label = grouping.groups[idx]
        if not out or out[-1] != label:
            out.append(label)
    return out


def match_dictionary(observed: list, dictionary: list,
                     grouping: ClassGrouping) -> PredictionList:
    """All dictionary words whose expected trace equals the observed one,
    dictionary order preserved, uniform scores."""
    matches = []
    for word in dictionary:
        try:
            trace = expected_word_trace(word, grouping)
        except ParamError:
            continue
        if trace == list(observed):
            matches.append((word, 1.0))
    return PredictionList(matches)

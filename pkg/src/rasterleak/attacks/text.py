"""Per-character-position text extraction.

Character slot i occupies a fixed row range, and row rendering time is
linear in row number, so each slot maps to a fixed segment of the averaged
cycle trace.  The rotate-to-max normalization makes the trace's phase origin
content-dependent; segment extraction therefore aligns every trace to a
calibration trace and offsets segments by a calibrated anchor (the cycle
origin's position within that calibration trace).
"""

from __future__ import annotations

import math

import numpy as np

from ..chunking import OutputTrace
from ..classify import align_to_reference, predict_proba, trace_features
from ..dsp import max_corr_shift
from ..errors import ParamError
from ..sim.screen import ScreenProfile
from ..sim.text import CharLayout
from .snoop import PredictionList


def char_segment_map(layout: CharLayout, profile: ScreenProfile, trace_len: int,
                     anchor: int = 0) -> list:
    """Sample ranges [start, end) of each slot within a cycle trace whose
    row 0 renders at index `anchor`.  Indices may exceed trace_len; cutting
    wraps circularly."""
    h = profile.height_px
    bl = profile.blanking_fraction
    ranges = []
    for r0, r1 in layout.slot_row_ranges:
        if not 0 <= r0 < r1 <= h:
            raise ParamError(f"slot rows [{r0}, {r1}) outside the screen")
        a = anchor + round(r0 / h * (1 - bl) * trace_len)
        b = anchor + round(r1 / h * (1 - bl) * trace_len)
        ranges.append((a, b))
    return ranges


def cut_segment(values: np.ndarray, seg: tuple) -> np.ndarray:
    a, b = seg
    return values.take(range(a, b), mode="wrap")


def calibrate_anchor(calib_values: np.ndarray, predicted_cycle: np.ndarray) -> int:
    """Locate the cycle origin inside a calibration trace by correlating it
    with the model-predicted envelope (whose origin is index 0 by
    construction)."""
    pred = trace_features(predicted_cycle, len(calib_values))
    shift, _ = max_corr_shift(pred, calib_values)
    return int(shift)


def slot_features(trace: OutputTrace, layout: CharLayout, profile: ScreenProfile,
                  anchor: int, align_ref: np.ndarray,
                  feature_len: int = 3200) -> list:
    """Aligned per-slot segments of an averaged trace, ready for the per-slot
    classifiers."""
    values = trace_features(trace.values, feature_len)
    values = align_to_reference(align_ref, values)
    segs = char_segment_map(layout, profile, feature_len, anchor=anchor)
    return [cut_segment(values, seg) for seg in segs]


def extract_text(trace: OutputTrace, models: list, dictionary: list,
                 layout: CharLayout, profile: ScreenProfile, anchor: int,
                 align_ref: np.ndarray, feature_len: int = 3200) -> PredictionList:
    """Rank dictionary words by the summed per-slot log-probability of their
    first min(len, slots) letters; ties break lexicographically."""
    if len(models) != layout.slot_count:
        raise ParamError("need one model per slot")
    segments = slot_features(trace, layout, profile, anchor, align_ref, feature_len)
    slot_probs = [predict_proba(models[i], segments[i])
                  for i in range(layout.slot_count)]
    letter_index = {ch: i for i, ch in enumerate(models[0].label_names)}

    scored = []
    for word in dictionary:
        letters = word.upper()[:layout.slot_count]
        if not letters or any(ch not in letter_index for ch in letters):
            continue
        score = 0.0
        for i, ch in enumerate(letters):
            score += math.log(max(slot_probs[i][letter_index[ch]], 1e-300))
        scored.append((word, score))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return PredictionList(scored)

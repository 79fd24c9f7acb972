"""End-to-end attacks: keyboard snooping, text extraction, distinguishing."""

import numpy as np

from ..chunking import OutputTrace
from ..classify import predict_confident, trace_features
from ..dsp import FeatureVector
from ..errors import ParamError
from .keyboard import ClassGrouping, build_grouping
from .snoop import (SKIPPED, PredictionList, collapse_labels, expected_word_trace,
                    match_dictionary, snoop_stream, window_labels)
from .text import (calibrate_anchor, char_segment_map, cut_segment, extract_text,
                   slot_features)
from .websites import make_videochat_frame, make_website_frame


def distinguish(features, model, threshold: float | None = None):
    """predict_confident semantics over an averaged trace or feature vector;
    None signals below-confidence."""
    if isinstance(features, OutputTrace):
        x = trace_features(features.values, model.feature_len)
    elif isinstance(features, FeatureVector):
        x = features.values
    else:
        x = np.asarray(features, dtype=float)
    if x.shape[0] != model.feature_len:
        raise ParamError(f"feature length {x.shape[0]} != model {model.feature_len}")
    return predict_confident(model, x, 0.0 if threshold is None else threshold)


__all__ = [
    "ClassGrouping", "build_grouping",
    "SKIPPED", "PredictionList", "collapse_labels", "expected_word_trace",
    "match_dictionary", "snoop_stream", "window_labels",
    "calibrate_anchor", "char_segment_map", "cut_segment", "extract_text",
    "slot_features",
    "make_videochat_frame", "make_website_frame",
    "distinguish",
]

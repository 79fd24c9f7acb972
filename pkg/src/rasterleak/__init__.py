"""rasterleak: a desk-scale lab for the screen-content acoustic side channel.

A physics-inspired simulator synthesizes the content-dependent leakage a
screen emits while rendering frames; the attack pipeline (demodulation,
jitter-robust chunk averaging, classification, keyboard snooping, text
extraction, website distinguishing) is validated closed-loop against the
simulator's ground truth.
"""

from .errors import (DegenerateSetError, EmptyDictionaryError, EstimationError,
                     FormatError, IoError, NoMasterError, ParamError,
                     RasterleakError, SyncBudgetError, UnsupportedError)
from .signal import SampledSignal

__version__ = "0.1.0"

__all__ = [
    "DegenerateSetError", "EmptyDictionaryError", "EstimationError", "FormatError",
    "IoError", "NoMasterError", "ParamError", "RasterleakError", "SyncBudgetError",
    "UnsupportedError", "SampledSignal", "__version__",
]

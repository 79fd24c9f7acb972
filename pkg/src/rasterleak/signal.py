"""Sampled-waveform container, the currency passed between pipeline stages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParamError


@dataclass(frozen=True)
class SampledSignal:
    """A uniformly sampled real waveform.

    Amplitudes are dimensionless with nominal range [-1, 1]; the canonical
    acquisition rates are 192000 and 44100 samples/second.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ParamError("signal must be one-dimensional")
        if not self.sample_rate_hz > 0:
            raise ParamError(f"sample rate must be positive, got {self.sample_rate_hz}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz

    def slice(self, start: int, stop: int) -> "SampledSignal":
        return SampledSignal(self.samples[start:stop].copy(), self.sample_rate_hz)

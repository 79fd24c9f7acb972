"""Acoustic propagation from screen to microphone.

Models the pieces that matter for the attacks: speed-of-sound delay,
1/distance attenuation beyond one meter, an optional receiver low-pass,
speech-band interference, the capture chain's broadband noise floor, and
rate reduction for low-rate (VoIP-like) receivers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dsp import bandpass, resample
from ..errors import ParamError
from ..signal import SampledSignal

SPEED_OF_SOUND_M_S = 343.0
SPEECH_BAND_HI_HZ = 8000.0


@dataclass(frozen=True)
class ChannelParams:
    distance_m: float = 0.0
    speech_interference_db: float | None = None  # dBFS of <8 kHz babble noise
    lowpass_hz: float | None = None
    target_rate_hz: float | None = None
    mic_noise_db: float | None = None            # dBFS broadband capture floor
    seed: int = 0

    def __post_init__(self):
        if self.distance_m < 0:
            raise ParamError("distance must be non-negative")


def apply_channel(signal: SampledSignal, channel: ChannelParams, profile=None) -> SampledSignal:
    """Propagate a trace through the channel; distance 0 with no options is
    the identity."""
    fs = signal.sample_rate_hz
    out = signal.samples
    rng = np.random.default_rng(channel.seed)

    if channel.distance_m > 0:
        delay = int(round(fs * channel.distance_m / SPEED_OF_SOUND_M_S))
        if delay > 0:
            shifted = np.zeros_like(out)
            shifted[delay:] = out[:len(out) - delay]
            out = shifted
        out = out / max(1.0, channel.distance_m)

    if channel.lowpass_hz is not None:
        out = bandpass(SampledSignal(out, fs), 0.0, channel.lowpass_hz).samples

    if channel.speech_interference_db is not None:
        babble = rng.standard_normal(len(out))
        babble = bandpass(SampledSignal(babble, fs), 0.0, SPEECH_BAND_HI_HZ).samples
        babble *= 10.0 ** (channel.speech_interference_db / 20.0) / np.sqrt(np.mean(babble ** 2))
        out = out + babble

    if channel.mic_noise_db is not None:
        floor = 10.0 ** (channel.mic_noise_db / 20.0)
        out = out + floor * rng.standard_normal(len(out))

    result = SampledSignal(out, fs)
    if channel.target_rate_hz is not None:
        if channel.target_rate_hz > fs:
            raise ParamError("target rate above the source rate")
        if channel.target_rate_hz < fs:
            result = resample(result, channel.target_rate_hz)
    return result

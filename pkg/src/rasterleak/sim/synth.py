"""Acoustic leakage synthesis.

Per refresh cycle, with v(t) the brightness of the pixel row being rendered
at time t (raster order over the non-blanking portion, the frame's mean
brightness during blanking), the emitted waveform is

    gain(phase) * [ bb_gain * (v - mean v)
                    + carrier_amp * (1 - am_depth * v) * cos(2*pi*fc*t) ]
    + white noise,

so the baseband term tracks brightness directly while the carrier envelope is
inversely modulated by it (dark rows ring loudest).  Cycle lengths jitter
between W and W+1 samples, with occasional abnormal cycles of 0.9x to 2x the
nominal length; every cycle's first sample index is reported as ground truth,
standing in for a hardware vsync probe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamError
from ..signal import SampledSignal
from ..traceio import FrameImage
from .frames import row_profile
from .screen import ScreenFingerprint, ScreenProfile


@dataclass(frozen=True)
class SimParams:
    baseband_gain: float = 0.05
    am_depth: float = 0.6
    carrier_amp: float = 0.5
    jitter_w_prob: float = 0.0       # probability a cycle is W+1 rather than W
    abnormal_prob: float = 0.0       # per-cycle probability of an abnormal length
    abnormal_range: tuple = (0.9, 2.0)
    noise_snr_db: float | None = None  # None disables noise
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.abnormal_range
        if not (0.5 <= lo < hi <= 2.5):
            raise ParamError("abnormal_range must be ordered and within [0.5, 2.5]")
        if not 0.0 <= self.am_depth <= 1.0:
            raise ParamError("am_depth must be in [0, 1]")
        if self.baseband_gain < 0 or self.carrier_amp < 0:
            raise ParamError("gains must be non-negative")
        if not 0.0 <= self.jitter_w_prob <= 1.0 or not 0.0 <= self.abnormal_prob <= 1.0:
            raise ParamError("probabilities must be in [0, 1]")


@dataclass(frozen=True)
class SimOutput:
    signal: SampledSignal
    cycle_starts: np.ndarray    # first sample index of each refresh cycle
    frame_schedule: np.ndarray  # frame id displayed during each cycle


def _normalize_frames(frames, refresh_rate_hz):
    """Accept a single frame or a [(frame, seconds), ...] playlist; return
    (frame list, per-cycle frame id lookup)."""
    if isinstance(frames, FrameImage):
        return [frames], lambda cycle: 0
    frames = list(frames)
    if not frames:
        raise ParamError("no frames given")
    if not all(isinstance(f, tuple) and len(f) == 2 for f in frames):
        raise ParamError("frames must be a FrameImage or (frame, seconds) pairs")
    imgs = [f for f, _ in frames]
    holds = [max(1, int(round(sec * refresh_rate_hz))) for _, sec in frames]
    bounds = np.cumsum(holds)

    def lookup(cycle):
        idx = int(np.searchsorted(bounds, cycle, side="right"))
        return min(idx, len(imgs) - 1)

    return imgs, lookup


def _cycle_row_values(rowvals: np.ndarray, v_blank: float, n: int,
                      blanking_fraction: float) -> np.ndarray:
    """v(t) over one cycle of n samples: blanking first, then rows in raster
    order spread evenly over the remainder."""
    nb = int(round(blanking_fraction * n))
    body = n - nb
    v = np.empty(n)
    v[:nb] = v_blank
    h = len(rowvals)
    rows = (np.arange(body, dtype=np.int64) * h) // body
    v[nb:] = rowvals[rows]
    return v


def simulate_trace(profile: ScreenProfile, fingerprint: ScreenFingerprint, frames,
                   duration_s: float, params: SimParams,
                   sample_rate_hz: float = 192000.0) -> SimOutput:
    if duration_s <= 0:
        raise ParamError("duration must be positive")
    fc = profile.carrier_hz + fingerprint.carrier_detune_hz
    if fc >= sample_rate_hz / 2:
        raise ParamError("carrier at or above Nyquist")
    imgs, frame_for_cycle = _normalize_frames(frames, profile.refresh_rate_hz)

    rowvals = [row_profile(img).values for img in imgs]
    vmeans = [float(rv.mean()) for rv in rowvals]

    rate = profile.refresh_rate_hz + fingerprint.refresh_offset_hz
    w_nominal = int(np.floor(sample_rate_hz / rate))
    rng = np.random.default_rng(params.seed)

    n_target = int(round(duration_s * sample_rate_hz))
    starts, lengths, schedule = [], [], []
    total = 0
    while total < n_target:
        if rng.random() < params.abnormal_prob:
            factor = rng.uniform(*params.abnormal_range)
            length = max(2, int(round(factor * w_nominal)))
        else:
            length = w_nominal + (1 if rng.random() < params.jitter_w_prob else 0)
        starts.append(total)
        lengths.append(length)
        schedule.append(frame_for_cycle(len(starts) - 1))
        total += length

    v = np.empty(total)
    gain = np.empty(total)
    base = np.empty(total)
    for s0, n, fid in zip(starts, lengths, schedule):
        vc = _cycle_row_values(rowvals[fid], vmeans[fid], n, profile.blanking_fraction)
        v[s0:s0 + n] = vc
        base[s0:s0 + n] = params.baseband_gain * (vc - vmeans[fid])
        gain[s0:s0 + n] = fingerprint.gain(np.arange(n) / n)

    t = np.arange(total) / sample_rate_hz
    carrier = params.carrier_amp * (1.0 - params.am_depth * v) * np.cos(2 * np.pi * fc * t)
    emitted = gain * (base + carrier)

    if params.noise_snr_db is not None:
        rms = float(np.sqrt(np.mean((gain * carrier) ** 2)))
        sigma = rms * 10.0 ** (-params.noise_snr_db / 20.0)
        emitted = emitted + sigma * rng.standard_normal(total)

    keep = [i for i, s in enumerate(starts) if s < n_target]
    return SimOutput(
        SampledSignal(emitted[:n_target], sample_rate_hz),
        np.array([starts[i] for i in keep], dtype=np.int64),
        np.array([schedule[i] for i in keep], dtype=np.int64),
    )


def predicted_cycle_envelope(profile: ScreenProfile, frame: FrameImage, length: int,
                             params: SimParams) -> np.ndarray:
    """The noise-free carrier envelope over one cycle, cycle start (= blanking
    start) at index 0.  This is attacker-side knowledge: it follows from the
    leakage model and the frame alone."""
    rowvals = row_profile(frame).values
    v = _cycle_row_values(rowvals, float(rowvals.mean()), length, profile.blanking_fraction)
    return params.carrier_amp * (1.0 - params.am_depth * v)

"""Spectral primitives: brick-wall filtering, envelopes, correlation, STFT,
windowed-sinc resampling, and FFT band features.

All filters are offline whole-trace FFT operations; the pipeline never runs
in real time, so brick-wall responses (with their ringing) are acceptable and
keep every stage exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .errors import ParamError
from .signal import SampledSignal


@dataclass(frozen=True)
class SpectrogramMatrix:
    """Magnitude STFT, time along rows, frequency along columns."""

    magnitudes: np.ndarray
    win_len: int
    hop_len: int
    sample_rate_hz: float


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    descriptor: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            raise ParamError("feature vector contains non-finite values")


def bandpass(signal: SampledSignal, lo_hz: float, hi_hz: float) -> SampledSignal:
    """Zero every FFT bin outside [lo_hz, hi_hz] and transform back."""
    nyquist = signal.sample_rate_hz / 2
    if not (0 <= lo_hz < hi_hz <= nyquist):
        raise ParamError(f"band [{lo_hz}, {hi_hz}] outside [0, {nyquist}]")
    n = len(signal.samples)
    spec = _fft.rfft(signal.samples)
    freqs = np.fft.rfftfreq(n, d=1.0 / signal.sample_rate_hz)
    spec[(freqs < lo_hz) | (freqs > hi_hz)] = 0.0
    return SampledSignal(_fft.irfft(spec, n), signal.sample_rate_hz)


def envelope(signal: SampledSignal) -> SampledSignal:
    """Magnitude of the analytic signal (mean removed first)."""
    n = len(signal.samples)
    if n < 16:
        raise ParamError("signal too short for envelope")
    x = signal.samples - signal.samples.mean()
    spec = _fft.fft(x)
    h = np.zeros(n)
    if n % 2 == 0:
        h[0] = h[n // 2] = 1.0
        h[1:n // 2] = 2.0
    else:
        h[0] = 1.0
        h[1:(n + 1) // 2] = 2.0
    return SampledSignal(np.abs(_fft.ifft(spec * h)), signal.sample_rate_hz)


def demodulate(signal: SampledSignal, lo_hz: float, hi_hz: float) -> SampledSignal:
    """envelope(bandpass(signal, lo, hi)) fused into one transform pair."""
    nyquist = signal.sample_rate_hz / 2
    if not (0 <= lo_hz < hi_hz <= nyquist):
        raise ParamError(f"band [{lo_hz}, {hi_hz}] outside [0, {nyquist}]")
    n = len(signal.samples)
    if n < 16:
        raise ParamError("signal too short for envelope")
    spec = _fft.rfft(signal.samples)
    freqs = np.fft.rfftfreq(n, d=1.0 / signal.sample_rate_hz)
    spec[(freqs < lo_hz) | (freqs > hi_hz)] = 0.0
    # Analytic spectrum: doubled positive bins, zero negatives.  DC and the
    # Nyquist bin are in-band only when lo_hz = 0 / hi_hz = nyquist.
    full = np.zeros(n, dtype=complex)
    full[:len(spec)] = 2.0 * spec
    full[0] = spec[0]
    if n % 2 == 0:
        full[n // 2] = spec[n // 2]
    analytic = _fft.ifft(full)
    env = np.abs(analytic)
    # The band excludes DC in every pipeline use, which makes the mean
    # subtraction of envelope() a no-op; keep it exact regardless.
    if freqs[0] >= lo_hz:  # lo_hz == 0: DC survived the mask
        env = np.abs(analytic - analytic.mean())
    return SampledSignal(env, signal.sample_rate_hz)


def pearson(a, b) -> float:
    """Pearson correlation after truncating to the shorter vector.

    Returns 0.0 when either vector is constant: downstream thresholds treat
    degenerate chunks as non-matching rather than propagating NaN.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = min(len(a), len(b))
    if n < 2:
        raise ParamError("pearson needs at least 2 overlapping samples")
    a = a[:n] - a[:n].mean()
    b = b[:n] - b[:n].mean()
    denom = np.sqrt(a.dot(a) * b.dot(b))
    if denom == 0.0:
        return 0.0
    return float(np.clip(a.dot(b) / denom, -1.0, 1.0))


def rotate(x, k: int):
    """Circular right-shift by k: rotate(x, k)[i] = x[(i - k) mod n]."""
    return np.roll(np.asarray(x), k)


def max_corr_shift(a, b) -> tuple:
    """Shift s in [0, n) with b ~= rotate(a, s), plus the Pearson value there.

    Computed via FFT circular cross-correlation of the standardized vectors,
    then exact Pearson at the top three candidates (ties: smallest shift).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) != len(b):
        raise ParamError("max_corr_shift requires equal lengths")
    n = len(a)
    if n < 2:
        raise ParamError("vectors too short")
    az = a - a.mean()
    bz = b - b.mean()
    na = np.sqrt(az.dot(az))
    nb = np.sqrt(bz.dot(bz))
    if na == 0.0 or nb == 0.0:
        return 0, 0.0
    az /= na
    bz /= nb
    # corr[s] = sum_i az[i] * bz[(i + s) mod n] = pearson(a, rotate(b, -s))
    # and rotate(b, -s) undoes b = rotate(a, s).
    corr = np.real(_fft.ifft(np.conj(_fft.fft(az)) * _fft.fft(bz)))
    top = np.argsort(corr)[-3:]
    best_shift, best_corr = 0, -2.0
    for s in sorted(int(s) for s in top):
        c = pearson(a, np.roll(b, -s))
        if c > best_corr + 1e-15:
            best_shift, best_corr = s, c
    return best_shift, float(best_corr)


def stft(signal: SampledSignal, win_len: int, hop_len: int) -> SpectrogramMatrix:
    """Hann-windowed magnitude STFT."""
    if win_len <= 0 or (win_len & (win_len - 1)) != 0:
        raise ParamError("win_len must be a power of two")
    if not 0 < hop_len <= win_len:
        raise ParamError("hop_len must be in (0, win_len]")
    x = signal.samples
    if len(x) < win_len:
        raise ParamError("signal shorter than the analysis window")
    window = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(win_len) / win_len)
    starts = np.arange(0, len(x) - win_len + 1, hop_len)
    frames = np.lib.stride_tricks.sliding_window_view(x, win_len)[starts]
    mags = np.abs(_fft.rfft(frames * window, axis=1))
    return SpectrogramMatrix(mags, win_len, hop_len, signal.sample_rate_hz)


def dominant_frequency_hz(signal: SampledSignal, lo_hz: float, hi_hz: float,
                          win_len: int = 4096) -> float:
    """Frequency of the strongest bin in [lo_hz, hi_hz] of the frame-averaged
    power spectrum (the spectrogram-reading view; bin width = rate/win_len)."""
    spec = stft(signal, win_len, win_len // 2)
    power = np.mean(spec.magnitudes ** 2, axis=0)
    freqs = np.fft.rfftfreq(win_len, d=1.0 / signal.sample_rate_hz)
    mask = (freqs >= lo_hz) & (freqs <= hi_hz)
    if not mask.any():
        raise ParamError("band contains no FFT bins")
    return float(freqs[mask][np.argmax(power[mask])])


def resample(signal: SampledSignal, new_rate_hz: float) -> SampledSignal:
    """Downsample: brick-wall low-pass at 0.45*new_rate, then windowed-sinc
    interpolation (Kaiser beta=8, 64 taps) at the new sample instants."""
    old_rate = signal.sample_rate_hz
    if new_rate_hz >= old_rate:
        raise ParamError("resample only downsamples")
    if new_rate_hz <= 0:
        raise ParamError("target rate must be positive")
    filtered = bandpass(signal, 0.0, 0.45 * new_rate_hz).samples
    n = len(filtered)
    out_len = max(1, int(round(n * new_rate_hz / old_rate)))
    ratio = old_rate / new_rate_hz
    taps = 64
    half = taps // 2
    beta = 8.0

    positions = np.arange(out_len) * ratio
    base = np.floor(positions).astype(np.int64)
    out = np.zeros(out_len)
    offsets = np.arange(-half + 1, half + 1)
    idx = base[:, None] + offsets[None, :]
    frac = positions[:, None] - idx
    valid = (idx >= 0) & (idx < n)
    idx_c = np.clip(idx, 0, n - 1)
    arg = 1.0 - (frac / half) ** 2
    window = np.where(arg > 0, np.i0(beta * np.sqrt(np.clip(arg, 0, None))), 0.0) / np.i0(beta)
    kernel = np.sinc(frac) * window * valid
    norm = kernel.sum(axis=1)
    norm[norm == 0] = 1.0
    out = (filtered[idx_c] * kernel).sum(axis=1) / norm
    return SampledSignal(out, new_rate_hz)


def band_features(signal: SampledSignal, lo_hz: float, hi_hz: float) -> FeatureVector:
    """L2-normalized FFT magnitudes of the bins inside [lo_hz, hi_hz]."""
    if signal.duration_s < 1.0:
        raise ParamError("band_features needs at least 1 s of signal")
    if not (0 <= lo_hz < hi_hz <= signal.sample_rate_hz / 2):
        raise ParamError("band outside [0, nyquist]")
    n = len(signal.samples)
    freqs = np.fft.rfftfreq(n, d=1.0 / signal.sample_rate_hz)
    mask = (freqs >= lo_hz) & (freqs <= hi_hz)
    if not mask.any():
        raise ParamError("band contains no FFT bins")
    mags = np.abs(_fft.rfft(signal.samples))[mask]
    norm = np.linalg.norm(mags)
    if norm > 0:
        mags = mags / norm
    return FeatureVector(mags, f"fft-band-{lo_hz:g}-{hi_hz:g}Hz")


def spectrogram_to_csv(spec: SpectrogramMatrix, path) -> None:
    """Rows = time frames, columns = frequency bins."""
    np.savetxt(path, spec.magnitudes, delimiter=",", fmt="%.9g")


def spectrogram_to_pgm(spec: SpectrogramMatrix, path) -> None:
    """Log-magnitude heat map, normalized per image."""
    from .traceio import FrameImage, write_pgm

    logm = np.log10(spec.magnitudes + 1e-12)
    lo, hi = logm.min(), logm.max()
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    img = np.round((logm - lo) * scale).astype(np.uint8)
    write_pgm(FrameImage(img.shape[0], img.shape[1], img), path)

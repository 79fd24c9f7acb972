import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rasterleak import dsp
from rasterleak.errors import ParamError
from rasterleak.signal import SampledSignal

FS = 192000


def tone(freq, seconds=0.25, amp=1.0, fs=FS):
    t = np.arange(int(seconds * fs)) / fs
    return SampledSignal(amp * np.cos(2 * np.pi * freq * t), fs)


def rms(x):
    return float(np.sqrt(np.mean(np.square(x))))


class TestBandpass:
    def test_stop_band_kills_out_of_band_tone(self):
        out = dsp.bandpass(tone(3000), 27500, 38000)
        assert rms(out.samples) < 1e-6 * rms(tone(3000).samples)

    def test_pass_band_preserves_tone(self):
        out = dsp.bandpass(tone(32000), 27500, 38000)
        assert rms(out.samples) == pytest.approx(rms(tone(32000).samples), rel=1e-3)

    def test_extracts_component_from_mixture(self):
        mix = SampledSignal(tone(3000).samples + tone(32000).samples, FS)
        out = dsp.bandpass(mix, 27500, 38000)
        assert dsp.pearson(out.samples, tone(32000).samples) > 0.999

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        sig = SampledSignal(rng.standard_normal(8192), FS)
        once = dsp.bandpass(sig, 27500, 38000)
        twice = dsp.bandpass(once, 27500, 38000)
        assert np.abs(twice.samples - once.samples).max() <= 1e-10 * max(1, np.abs(once.samples).max())

    def test_band_out_of_range(self):
        with pytest.raises(ParamError):
            dsp.bandpass(tone(1000), 30000, 20000)
        with pytest.raises(ParamError):
            dsp.bandpass(tone(1000), 0, FS)


class TestEnvelope:
    def test_constant_tone_envelope(self):
        env = dsp.envelope(tone(32000, amp=0.7)).samples
        interior = env[len(env) // 10:-len(env) // 10]
        assert np.abs(interior - 0.7).max() < 0.02 * 0.7

    def test_am_identity(self):
        t = np.arange(FS // 4) / FS
        carrier = (1 + 0.5 * np.cos(2 * np.pi * 100 * t)) * np.cos(2 * np.pi * 32000 * t)
        env = dsp.envelope(SampledSignal(carrier, FS)).samples
        assert dsp.pearson(env, 1 + 0.5 * np.cos(2 * np.pi * 100 * t)) > 0.99

    def test_dc_only_is_zero(self):
        env = dsp.envelope(SampledSignal(np.full(64, 3.5), FS)).samples
        assert np.abs(env).max() < 1e-12

    def test_non_negative(self, rng):
        env = dsp.envelope(SampledSignal(rng.standard_normal(500), FS)).samples
        assert np.all(env >= 0)


class TestPearson:
    def test_identity(self, rng):
        a = rng.standard_normal(100)
        assert dsp.pearson(a, a) == pytest.approx(1.0)

    def test_negation(self, rng):
        a = rng.standard_normal(100)
        assert dsp.pearson(a, -a) == pytest.approx(-1.0)

    def test_constant_convention(self, rng):
        assert dsp.pearson(rng.standard_normal(50), np.ones(50)) == 0.0

    def test_truncates_to_shorter(self, rng):
        a = rng.standard_normal(100)
        assert dsp.pearson(a, a[:60]) == pytest.approx(1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1),
           st.floats(min_value=0.01, max_value=100),
           st.floats(min_value=-50, max_value=50))
    def test_scale_offset_invariance(self, seed, alpha, beta):
        r = np.random.default_rng(seed)
        a, b = r.standard_normal(64), r.standard_normal(64)
        base = dsp.pearson(a, b)
        assert dsp.pearson(alpha * a + beta, b) == pytest.approx(base, abs=1e-9)
        assert dsp.pearson(-alpha * a + beta, b) == pytest.approx(-base, abs=1e-9)

    def test_symmetry(self, rng):
        a, b = rng.standard_normal(80), rng.standard_normal(80)
        assert dsp.pearson(a, b) == pytest.approx(dsp.pearson(b, a), abs=1e-12)


class TestMaxCorrShift:
    def test_zero_shift(self, rng):
        a = rng.standard_normal(300)
        assert dsp.max_corr_shift(a, a) == (0, pytest.approx(1.0))

    def test_recovers_rotation(self, rng):
        a = rng.standard_normal(300)
        s, c = dsp.max_corr_shift(a, dsp.rotate(a, 37))
        assert (s, c) == (37, pytest.approx(1.0))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=0, max_value=255))
    def test_recovers_any_rotation(self, seed, k):
        a = np.random.default_rng(seed).standard_normal(256)
        s, c = dsp.max_corr_shift(a, dsp.rotate(a, k))
        assert s == k
        assert c > 0.999999

    def test_length_mismatch(self, rng):
        with pytest.raises(ParamError):
            dsp.max_corr_shift(rng.standard_normal(10), rng.standard_normal(11))


class TestStft:
    def test_pure_tone_dominant_row(self):
        sig = tone(6000, seconds=0.05)
        spec = dsp.stft(sig, 1024, 512)
        freqs = np.fft.rfftfreq(1024, 1 / FS)
        for row in spec.magnitudes:
            assert abs(freqs[np.argmax(row)] - 6000) < FS / 1024

    def test_all_zero_signal(self):
        spec = dsp.stft(SampledSignal(np.zeros(4096), FS), 1024, 256)
        assert np.all(spec.magnitudes == 0)

    def test_column_count(self):
        spec = dsp.stft(SampledSignal(np.zeros(4096), FS), 512, 512)
        assert spec.magnitudes.shape[1] == 257

    def test_parseval(self, rng):
        x = rng.standard_normal(8192)
        spec = dsp.stft(SampledSignal(x, 1000.0), 1024, 512)
        win = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(1024) / 1024)
        windowed = sum(float(np.sum((x[s:s + 1024] * win) ** 2))
                       for s in range(0, 8192 - 1024 + 1, 512))
        m = spec.magnitudes
        spectral = (np.sum(m[:, 0] ** 2) + 2 * np.sum(m[:, 1:-1] ** 2)
                    + np.sum(m[:, -1] ** 2)) / 1024
        assert spectral == pytest.approx(windowed, rel=0.01)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ParamError):
            dsp.stft(SampledSignal(np.zeros(4096), FS), 1000, 500)

    def test_rejects_short_signal(self):
        with pytest.raises(ParamError):
            dsp.stft(SampledSignal(np.zeros(100), FS), 1024, 512)


class TestResample:
    def test_dc_preserved(self):
        out = dsp.resample(SampledSignal(np.ones(19200), FS), 44100)
        assert np.abs(out.samples - 1).max() < 1e-9

    def test_above_new_nyquist_removed(self):
        out = dsp.resample(tone(32000), 44100)
        assert rms(out.samples) < 0.01 * rms(tone(32000).samples)

    def test_in_band_tone_preserved(self):
        src = tone(10000, seconds=0.5)
        out = dsp.resample(src, 44100)
        assert rms(out.samples) == pytest.approx(rms(src.samples), rel=0.02)
        assert len(out.samples) == pytest.approx(len(src.samples) * 44100 / FS, abs=1)

    def test_rejects_upsampling(self):
        with pytest.raises(ParamError):
            dsp.resample(tone(1000, fs=44100), 48000)


class TestBandFeatures:
    def test_tone_argmax_bin(self):
        sig = tone(12000, seconds=1.0, fs=44100)
        fv = dsp.band_features(sig, 9000, 15000)
        freqs = np.fft.rfftfreq(len(sig.samples), 1 / 44100)
        band = freqs[(freqs >= 9000) & (freqs <= 15000)]
        assert abs(band[np.argmax(fv.values)] - 12000) < 2

    def test_white_noise_no_dominant_bin(self, rng):
        sig = SampledSignal(rng.standard_normal(44100), 44100)
        fv = dsp.band_features(sig, 9000, 15000)
        assert fv.values.max() <= 5 * np.median(fv.values)

    def test_bin_count_6s(self, rng):
        sig = SampledSignal(rng.standard_normal(6 * 44100), 44100)
        fv = dsp.band_features(sig, 9000, 15000)
        assert len(fv.values) == np.floor(6 * 15000) - np.ceil(6 * 9000) + 1

    def test_l2_normalized(self, rng):
        sig = SampledSignal(rng.standard_normal(44100), 44100)
        fv = dsp.band_features(sig, 9000, 15000)
        assert np.linalg.norm(fv.values) == pytest.approx(1.0)

    def test_short_signal_rejected(self, rng):
        with pytest.raises(ParamError):
            dsp.band_features(SampledSignal(np.zeros(1000), 44100), 9000, 15000)


def test_spectrogram_exports(tmp_path, rng):
    spec = dsp.stft(SampledSignal(rng.standard_normal(4096), FS), 512, 256)
    csv = tmp_path / "s.csv"
    pgm = tmp_path / "s.pgm"
    dsp.spectrogram_to_csv(spec, csv)
    dsp.spectrogram_to_pgm(spec, pgm)
    loaded = np.loadtxt(csv, delimiter=",")
    assert loaded.shape == spec.magnitudes.shape
    from rasterleak.traceio import read_pgm
    img = read_pgm(pgm)
    assert (img.height_px, img.width_px) == spec.magnitudes.shape

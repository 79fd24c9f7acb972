import numpy as np
import pytest

from rasterleak import dsp
from rasterleak.chunking import (ChunkParams, ChunkSet, average_chunks, baseline_chunkify,
                                 chunkify, find_s, mean_chunk_correlation, outlier_reject,
                                 preprocess, probe_average, read_output_trace,
                                 write_output_trace)
from rasterleak.errors import (DegenerateSetError, EstimationError, NoMasterError,
                               ParamError, SyncBudgetError)
from rasterleak.signal import SampledSignal
from rasterleak.sim import (SimParams, gen_zebra_frame, null_fingerprint,
                            make_fingerprint, simulate_trace)

FS = 192000.0


def simulate_env(profile, frame, seconds, params, fingerprint=None):
    fp = fingerprint or null_fingerprint()
    out = simulate_trace(profile, fp, frame, seconds, params)
    return dsp.demodulate(out.signal, 27500, 38000), out


def boundary_errors(boundaries, cycle_starts):
    return np.array([np.abs(cycle_starts - b).min() for b in boundaries])


class TestChunkify:
    def test_noise_free_jitter_boundaries(self, desk22):
        import dataclasses
        # de-facto refresh 59.906 Hz puts the true cycle length at 3205/3206
        fp = dataclasses.replace(null_fingerprint(), refresh_offset_hz=-0.0937)
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        env, out = simulate_env(desk22, frame, 2.0,
                                SimParams(jitter_w_prob=0.35, seed=3), fingerprint=fp)
        cs = chunkify(env, ChunkParams(S=3206, d=1, T=0.9))
        errs = boundary_errors(cs.boundaries, out.cycle_starts)
        assert np.all(errs <= 1)
        assert len(cs.chunks) > 100

    def test_abnormal_cycles_enter_sync(self, desk22):
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        env, out = simulate_env(
            desk22, frame, 3.0,
            SimParams(jitter_w_prob=0.3, abnormal_prob=0.03, noise_snr_db=20.0, seed=11))
        cs = chunkify(env, ChunkParams(S=3200, d=1, T=0.9))
        assert cs.sync_iterations > 0
        errs = boundary_errors(cs.boundaries, out.cycle_starts)
        assert np.all(errs <= 2)

    def test_white_noise_fails(self, rng, default_chunk_params):
        sig = SampledSignal(rng.standard_normal(int(1.0 * FS)), FS)
        with pytest.raises((NoMasterError, SyncBudgetError)):
            chunkify(sig, default_chunk_params)

    def test_signal_too_short(self, default_chunk_params, rng):
        with pytest.raises(ParamError):
            chunkify(SampledSignal(rng.standard_normal(5000), FS), default_chunk_params)

    def test_chunks_equal_length_boundaries_increasing(self, desk22, noisy_params):
        env, _ = simulate_env(desk22, gen_zebra_frame(desk22, 16, "square"), 1.0,
                              noisy_params)
        cs = chunkify(env, ChunkParams(S=3200, d=1, T=0.9))
        assert cs.chunks.ndim == 2
        assert np.all(np.diff(cs.boundaries) > 0)
        assert cs.master_index == 0

    def test_param_validation(self):
        with pytest.raises(ParamError):
            ChunkParams(S=3200, d=0)
        with pytest.raises(ParamError):
            ChunkParams(S=3200, d=4)
        with pytest.raises(ParamError):
            ChunkParams(S=3200, T=0.99)


class TestOutlierReject:
    def _chunkset(self, chunks):
        chunks = np.asarray(chunks, dtype=float)
        n = len(chunks)
        return ChunkSet(chunks, np.arange(n, dtype=np.int64) * chunks.shape[1],
                        np.ones(n), 0, n, FS)

    def test_ten_identical_removes_exactly_one(self, rng):
        base = rng.standard_normal(64)
        cs = outlier_reject(self._chunkset([base] * 10))
        assert len(cs.chunks) == 9

    def test_spiked_chunk_removed(self, rng):
        base = rng.standard_normal(64)
        spiked = base.copy()
        spiked[10] = 10 * np.abs(base).max()
        cs = outlier_reject(self._chunkset([base] * 9 + [spiked]))
        assert len(cs.chunks) == 9
        assert not any(np.array_equal(c, spiked) for c in cs.chunks)

    def test_rejection_never_hurts_mean_correlation(self, desk22):
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        env, _ = simulate_env(desk22, frame, 2.0,
                              SimParams(jitter_w_prob=0.3, noise_snr_db=10.0, seed=2))
        cs = chunkify(env, ChunkParams(S=3200, d=1, T=0.5))
        assert mean_chunk_correlation(outlier_reject(cs)) >= mean_chunk_correlation(cs)

    def test_degenerate_set(self, rng):
        base = rng.standard_normal(32)
        with pytest.raises(DegenerateSetError):
            outlier_reject(self._chunkset([base, base]))

    def test_needs_two_chunks(self, rng):
        with pytest.raises(ParamError):
            outlier_reject(self._chunkset([rng.standard_normal(32)]))


class TestAverageChunks:
    def test_single_chunk_rotated_to_max(self, rng):
        chunk = rng.standard_normal(50)
        cs = ChunkSet(chunk[None, :], np.array([0]), np.ones(1), 0, 1, FS)
        trace = average_chunks(cs)
        assert trace.values[0] == trace.values.max()
        assert sorted(trace.values) == sorted(chunk)

    def test_mirrored_pair_cancels(self, rng):
        v = rng.standard_normal(40)
        mirrored = -v + 2 * v.mean()
        cs = ChunkSet(np.stack([v, mirrored]), np.array([0, 40]), np.ones(2), 0, 2, FS)
        trace = average_chunks(cs)
        assert np.abs(trace.values - trace.values[0]).max() < 1e-12

    def test_rotation_invariant_values_first_is_max(self, desk22, noisy_params):
        env, _ = simulate_env(desk22, gen_zebra_frame(desk22, 24, "square"), 1.0,
                              noisy_params)
        trace = average_chunks(outlier_reject(chunkify(env, ChunkParams(S=3200))))
        assert np.all(trace.values[0] >= trace.values)

    def test_averaging_approaches_reference(self, desk22, nullfp):
        from rasterleak.sim import predicted_cycle_envelope
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        params = SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=8)
        env, out = simulate_env(desk22, frame, 2.0, params)
        cs = outlier_reject(chunkify(env, ChunkParams(S=3200)))
        trace = average_chunks(cs)
        assert cs.chunks.shape[0] >= 100
        ref = predicted_cycle_envelope(desk22, frame, len(trace.values), params)
        _, corr = dsp.max_corr_shift(ref, trace.values)
        assert corr >= 0.95


class TestBaseline:
    def test_exact_rate_periodic_boundaries(self, desk22, nullfp, clean_params):
        out = simulate_trace(desk22, nullfp, gen_zebra_frame(desk22, 16, "square"),
                             1.0, clean_params)
        env = dsp.demodulate(out.signal, 27500, 38000)
        cs = baseline_chunkify(env, 60.0)
        assert np.all(np.diff(cs.boundaries) == 3200)

    def test_underperforms_chunkify_on_abnormal_trace(self, desk22):
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        params = SimParams(jitter_w_prob=0.3, abnormal_prob=0.03,
                           noise_snr_db=20.0, seed=4)
        env, _ = simulate_env(desk22, frame, 2.0, params)
        ours = chunkify(env, ChunkParams(S=3200, d=1, T=0.9))
        naive = baseline_chunkify(env, 60.0)
        assert mean_chunk_correlation(naive) < mean_chunk_correlation(ours)


class TestFindS:
    def _signals(self, desk22, offset_hz, seeds, seconds=3.0):
        from rasterleak.sim import ScreenFingerprint
        import dataclasses
        fp = dataclasses.replace(null_fingerprint(), refresh_offset_hz=offset_hz)
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        sigs = []
        for seed in seeds:
            params = SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=seed)
            out = simulate_trace(desk22, fp, frame, seconds, params)
            sigs.append(dsp.demodulate(out.signal, 27500, 38000))
        return sigs

    def test_recovers_true_w(self, desk22):
        w_true = int(np.floor(192000 / 60.05))  # 3197
        sigs = self._signals(desk22, 0.05, (1, 2))
        assert find_s(sigs, range(w_true - 4, w_true + 5), d=1, T=0.9) == w_true

    def test_recovers_nominal_w(self, desk22):
        sigs = self._signals(desk22, 0.0, (5,))
        assert find_s(sigs, range(3196, 3205), d=1, T=0.9) == 3200

    def test_white_noise_estimation_error(self, rng):
        sig = SampledSignal(rng.standard_normal(int(3 * FS)), FS)
        with pytest.raises(EstimationError):
            find_s([sig], range(3196, 3205), d=1, T=0.9)

    def test_order_invariant(self, desk22):
        sigs = self._signals(desk22, 0.0, (6, 7))
        assert find_s(sigs, range(3196, 3205)) == find_s(sigs[::-1], range(3196, 3205))


class TestPreprocess:
    def test_punctured_zebra_flat_middle(self, desk22, nullfp):
        from rasterleak.sim import predicted_cycle_envelope
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        params = SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=6)
        out = simulate_trace(desk22, nullfp, frame, 2.0, params)
        trace = preprocess(out.signal, ChunkParams(S=3200))
        ref = predicted_cycle_envelope(desk22, frame, len(trace.values), params)
        shift, corr = dsp.max_corr_shift(ref, trace.values)
        assert corr >= 0.95
        aligned = np.roll(trace.values, -shift)
        h, bl, L = desk22.height_px, desk22.blanking_fraction, len(trace.values)
        a = round((bl + (h // 3) / h * (1 - bl)) * L)
        b = round((bl + (2 * h // 3) / h * (1 - bl)) * L)
        mid = aligned[a:b]
        outer = np.concatenate([aligned[round(bl * L):a], aligned[b:]])
        rms_about_mean = lambda x: np.sqrt(np.mean((x - x.mean()) ** 2))
        assert rms_about_mean(mid) <= 0.25 * rms_about_mean(outer)

    def test_two_seeds_agree(self, desk22, nullfp):
        frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
        traces = []
        for seed in (21, 22):
            params = SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=seed)
            out = simulate_trace(desk22, nullfp, frame, 2.0, params)
            traces.append(preprocess(out.signal, ChunkParams(S=3200)))
        n = min(len(traces[0].values), len(traces[1].values))
        _, corr = dsp.max_corr_shift(traces[0].values[:n], traces[1].values[:n])
        assert corr >= 0.95

    def test_low_rate_rejected(self, rng):
        sig = SampledSignal(rng.standard_normal(44100), 44100.0)
        with pytest.raises(ParamError):
            preprocess(sig, ChunkParams(S=700))


class TestProbeChunking:
    def test_probe_average_matches_simulated_cycle(self, desk22, nullfp, clean_params):
        frame = gen_zebra_frame(desk22, 16, "square")
        out = simulate_trace(desk22, nullfp, frame, 1.0, clean_params)
        env = dsp.demodulate(out.signal, 27500, 38000)
        avg = probe_average(env, out.cycle_starts)
        assert len(avg) == 3200


class TestOutputTraceIo:
    def test_round_trip(self, tmp_path, rng):
        from rasterleak.chunking import OutputTrace
        vals = rng.standard_normal(100)
        vals[0] = vals.max() + 1
        trace = OutputTrace(vals, 42, FS)
        path = tmp_path / "trace.csv"
        write_output_trace(trace, path)
        back = read_output_trace(path)
        assert np.array_equal(back.values, trace.values)
        assert back.source_count == 42
        assert back.sample_rate_hz == FS


def test_find_s_scores_and_fingerprint_mix(desk22):
    # different fingerprints, same candidate landscape shape
    frame = gen_zebra_frame(desk22, 21, "sinusoidal", punctured=True)
    fp = make_fingerprint(1)
    params = SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=9)
    out = simulate_trace(desk22, fp, frame, 3.0, params)
    env = dsp.demodulate(out.signal, 27500, 38000)
    w_true = int(np.floor(192000 / (60 + fp.refresh_offset_hz)))
    got = find_s([env], range(w_true - 4, w_true + 5), d=1, T=0.9)
    assert got == w_true

"""Compiled-vs-python kernel parity and benchmark.

The chunker's hot kernels exist twice: a Cython extension and a numpy
fallback chosen at import.  Parity is a hard requirement; the benchmark
output is informational (absolute performance bounds live in the acceptance
suite)."""

import time

import numpy as np
import pytest

from rasterleak import dsp
from rasterleak.chunking import (ChunkParams, available_backends, chunkify,
                                 get_backend)
from rasterleak.sim import SimParams, gen_zebra_frame, null_fingerprint, simulate_trace


@pytest.fixture(scope="module")
def demod_env(desk22=None):
    from rasterleak.sim import get_profile
    profile = get_profile("desk22")
    frame = gen_zebra_frame(profile, 21, "sinusoidal", punctured=True)
    params = SimParams(jitter_w_prob=0.3, abnormal_prob=0.02, noise_snr_db=20.0, seed=13)
    out = simulate_trace(profile, null_fingerprint(), frame, 2.0, params)
    return dsp.demodulate(out.signal, 27500, 38000)


def test_both_backends_available():
    # the numpy fallback must always exist; the compiled one is expected in
    # a normal build but its absence only disables the parity comparison
    assert "python" in available_backends()


needs_both = pytest.mark.skipif(len(available_backends()) < 2,
                                reason="compiled extension not built")


@needs_both
def test_kernel_parity_scan_master(demod_env):
    env = demod_env.samples
    sizes = np.arange(3198, 3202, dtype=np.int64)
    for backend in available_backends():
        kern = get_backend(backend)
        res = kern.scan_master(env, sizes, 3198, 0.9)
        if backend == "python":
            expect = res
    assert get_backend("compiled").scan_master(env, sizes, 3198, 0.9) == expect


@needs_both
def test_kernel_parity_range_corr(demod_env, rng):
    env = demod_env.samples
    ref = env[:3198] - env[:3198].mean()
    ref = ref / np.sqrt(ref.dot(ref))
    for off0, count in ((3199, 4), (5000, 600), (12345, 1)):
        a = get_backend("python").range_corr(env, off0, count, 3198, ref)
        b = get_backend("compiled").range_corr(env, off0, count, 3198, ref)
        assert np.allclose(a, b, atol=1e-9)


@needs_both
def test_chunkify_identical_across_backends(demod_env):
    results = {}
    for backend in available_backends():
        results[backend] = chunkify(demod_env, ChunkParams(S=3200, d=1, T=0.9),
                                    backend=backend)
    a, b = results["python"], results["compiled"]
    assert np.array_equal(a.boundaries, b.boundaries)
    assert np.array_equal(a.chunks, b.chunks)
    assert (a.sync_iterations, a.total_iterations) == (b.sync_iterations, b.total_iterations)
    assert np.allclose(a.corrs, b.corrs, atol=1e-9)


def test_backend_benchmark(demod_env, capsys):
    params = ChunkParams(S=3200, d=1, T=0.9)
    rows = []
    for backend in available_backends():
        chunkify(demod_env, params, backend=backend)  # warm up
        t0 = time.perf_counter()
        chunkify(demod_env, params, backend=backend)
        rows.append((backend, time.perf_counter() - t0))
    with capsys.disabled():
        print("\nchunkify backend benchmark (2 s trace @192 kHz):")
        for backend, dt in rows:
            print(f"  {backend:>8}: {dt * 1000:7.1f} ms")
    for _, dt in rows:
        assert dt < 10.0

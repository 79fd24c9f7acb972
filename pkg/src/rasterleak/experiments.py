"""Seeded end-to-end experiments shared by the CLI and the acceptance suite.

Every function here is deterministic given its seed arguments: simulation
seeds, channel seeds, and dataset draws all derive from them.  Sizes are
desk-scale: large enough to exercise the pipeline meaningfully, small enough
to run on a laptop.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import numpy as np

from . import dsp
from .attacks import (build_grouping, calibrate_anchor, expected_word_trace,
                      match_dictionary, make_videochat_frame, make_website_frame,
                      slot_features, snoop_stream)
from .attacks.text import extract_text
from .chunking import (ChunkParams, OutputTrace, baseline_chunkify, chunkify,
                       demod_chunks, find_s, mean_chunk_correlation, outlier_reject,
                       preprocess, probe_average)
from .classify import (LabeledDataset, MixSpec, align_to_reference, assemble_collection,
                       evaluate, predict_proba, train_centroid, train_softmax,
                       trace_features)
from .errors import RasterleakError
from .sim import (ChannelParams, SimParams, apply_channel, gen_zebra_frame, get_profile,
                  make_char_layout, make_fingerprint, make_portrait_layout,
                  null_fingerprint, predicted_cycle_envelope, render_keyboard_frame,
                  render_text_frame, simulate_trace, solid_frame)

FEATURE_LEN = 3200
LETTERS = [chr(ord("A") + i) for i in range(26)]

SIM_PRESETS = {
    "clean": SimParams(),
    "standard": SimParams(jitter_w_prob=0.3, abnormal_prob=0.01, noise_snr_db=20.0),
    "jittery": SimParams(jitter_w_prob=0.3, abnormal_prob=0.02, noise_snr_db=20.0),
    "noisy": SimParams(jitter_w_prob=0.3, abnormal_prob=0.03, noise_snr_db=10.0),
}

CHANNEL_PRESETS = {
    "contact": ChannelParams(),
    "desk": ChannelParams(distance_m=0.5, mic_noise_db=-50.0),
    "room": ChannelParams(distance_m=2.0, mic_noise_db=-50.0),
    "voip": ChannelParams(distance_m=0.4, mic_noise_db=-55.0, target_rate_hz=44100.0),
}

# T follows the signal regime: 0.9 for clean close-range captures, 0.5 once
# the mic noise floor bites.
PRESET_T = {"contact": 0.9, "desk": 0.9, "room": 0.5, "voip": 0.5}


def sim_preset(name: str, seed: int) -> SimParams:
    return dataclasses.replace(SIM_PRESETS[name], seed=seed)


def channel_preset(name: str, seed: int = 0) -> ChannelParams:
    return dataclasses.replace(CHANNEL_PRESETS[name], seed=seed)


def common_words() -> list:
    text = resources.files("rasterleak.data").joinpath("common_words.txt").read_text()
    return [w for w in text.split() if w]


def synthesize_dictionary(base_words: list, size: int = 102000, seed: int = 0) -> list:
    """Deterministically pad a word list with pseudo-words up to `size`
    entries (capacity testing for the dictionary-matching stage)."""
    rng = np.random.default_rng(seed)
    words = list(dict.fromkeys(w.lower() for w in base_words))
    seen = set(words)
    alphabet = np.array(list("abcdefghijklmnopqrstuvwxyz"))
    while len(words) < size:
        length = int(rng.integers(3, 9))
        word = "".join(alphabet[rng.integers(0, 26, length)])
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words[:size]


def true_cycle_samples(profile, fingerprint, sample_rate_hz: float = 192000.0) -> int:
    return int(np.floor(sample_rate_hz / (profile.refresh_rate_hz
                                          + fingerprint.refresh_offset_hz)))


def estimate_cycle_samples(profile, fingerprint, seed: int, preset: str = "standard",
                           spread: int = 4, seconds: float = 3.0) -> int:
    """Attacker-side S recovery: brute-force find_s on one calibration
    recording of a stripe pattern."""
    frame = gen_zebra_frame(profile, 21, "sinusoidal", punctured=True)
    out = simulate_trace(profile, fingerprint, frame, seconds, sim_preset(preset, seed))
    env = dsp.demodulate(out.signal, 27500.0, 38000.0)
    nominal = int(round(192000.0 / profile.refresh_rate_hz))
    return find_s([env], range(nominal - spread, nominal + spread + 1), d=1, T=0.9)


# --------------------------------------------------------------------------
# signal-level experiments


def zebra_law_experiment(seed: int = 0, periods=(8, 16, 21, 24, 32, 40),
                         seconds: float = 2.0) -> list:
    """Measured leakage peak vs. (rows/period)*refresh for each stripe
    period; rows = (period, law_hz, peak_hz, bin_hz)."""
    profile = get_profile("desk22-ideal")
    fp = null_fingerprint()
    rows = []
    for i, period in enumerate(periods):
        kind = "square" if period % 2 == 0 else "sinusoidal"
        frame = gen_zebra_frame(profile, period, kind)
        params = dataclasses.replace(SIM_PRESETS["standard"], abnormal_prob=0.0,
                                     seed=seed * 1000 + i)
        out = simulate_trace(profile, fp, frame, seconds, params)
        env = dsp.envelope(dsp.bandpass(out.signal, 27500.0, 38000.0))
        peak = dsp.dominant_frequency_hz(env, 500.0, 20000.0)
        law = profile.height_px / period * profile.refresh_rate_hz
        rows.append((period, law, peak, 192000.0 / 4096))
    return rows


def chunking_accuracy_experiment(seeds=range(20), seconds: float = 3.0) -> list:
    """Boundary accuracy and chunkify-vs-baseline quality on jittery traces
    with abnormal cycles; one dict per seed."""
    profile = get_profile("desk22")
    fp = null_fingerprint()
    frame = gen_zebra_frame(profile, 21, "sinusoidal", punctured=True)
    results = []
    for seed in seeds:
        out = simulate_trace(profile, fp, frame, seconds, sim_preset("jittery", seed))
        env = dsp.demodulate(out.signal, 27500.0, 38000.0)
        cs = chunkify(env, ChunkParams(S=3200, d=1, T=0.9))
        errs = np.array([np.abs(out.cycle_starts - b).min() for b in cs.boundaries])
        diffs = np.diff(out.cycle_starts)
        has_abnormal = bool(np.any((diffs != 3200) & (diffs != 3201)))
        naive = baseline_chunkify(env, profile.refresh_rate_hz + fp.refresh_offset_hz)
        results.append({
            "seed": seed,
            "boundaries_within_2": float(np.mean(errs <= 2)),
            "has_abnormal": has_abnormal,
            "chunkify_corr": mean_chunk_correlation(cs),
            "baseline_corr": mean_chunk_correlation(naive),
        })
    return results


def averaging_quality_experiment(seed: int = 0, seconds: float = 2.0) -> dict:
    """Punctured-zebra closed loop: output-vs-reference correlation and the
    flattened middle third."""
    profile = get_profile("desk22")
    fp = null_fingerprint()
    frame = gen_zebra_frame(profile, 21, "sinusoidal", punctured=True)
    params = sim_preset("standard", seed)
    out = simulate_trace(profile, fp, frame, seconds, params)
    trace = preprocess(out.signal, ChunkParams(S=3200, d=1, T=0.9))
    ref = predicted_cycle_envelope(profile, frame, len(trace.values), params)
    shift, corr = dsp.max_corr_shift(ref, trace.values)
    aligned = np.roll(trace.values, -shift)
    h, bl, L = profile.height_px, profile.blanking_fraction, len(trace.values)
    a = round((bl + (h // 3) / h * (1 - bl)) * L)
    b = round((bl + (2 * h // 3) / h * (1 - bl)) * L)
    mid = aligned[a:b]
    outer = np.concatenate([aligned[round(bl * L):a], aligned[b:]])
    rms = lambda x: float(np.sqrt(np.mean((x - x.mean()) ** 2)))
    return {"corr": float(corr), "mid_to_outer_rms": rms(mid) / rms(outer),
            "source_count": trace.source_count}


def find_s_experiment(seeds=range(10), n_signals: int = 3, seconds: float = 4.0) -> list:
    """Per seed: simulate a screen with a fingerprint-specific refresh
    offset, then recover its true cycle length over candidates W +- 4."""
    profile = get_profile("desk22")
    frame = gen_zebra_frame(profile, 21, "sinusoidal", punctured=True)
    results = []
    for seed in seeds:
        fp = make_fingerprint(seed)
        w_true = true_cycle_samples(profile, fp)
        envs = []
        for k in range(n_signals):
            out = simulate_trace(profile, fp, frame, seconds,
                                 sim_preset("standard", seed * 100 + k))
            envs.append(dsp.demodulate(out.signal, 27500.0, 38000.0))
        found = find_s(envs, range(w_true - 4, w_true + 5), d=1, T=0.9)
        results.append((w_true, found))
    return results


def matching_experiment(seed: int = 0, per_pattern: int = 5,
                        presets=("contact", "room")) -> dict:
    """Cross-screen rotational-correlation matching: centroid references from
    one screen, test traces from another through two channel presets."""
    profile = get_profile("desk22")
    patterns = [("z8", gen_zebra_frame(profile, 8, "square")),
                ("z16", gen_zebra_frame(profile, 16, "square")),
                ("z24", gen_zebra_frame(profile, 24, "square")),
                ("z32", gen_zebra_frame(profile, 32, "square")),
                ("z40", gen_zebra_frame(profile, 40, "square")),
                ("z16p", gen_zebra_frame(profile, 16, "square", punctured=True))]
    fp_a, fp_b = make_fingerprint(seed * 2 + 1), make_fingerprint(seed * 2 + 2)
    s_a = true_cycle_samples(profile, fp_a)
    s_b = true_cycle_samples(profile, fp_b)

    def one_trace(fp, s_samples, frame, preset, sim_seed):
        params = sim_preset("standard", sim_seed)
        out = simulate_trace(profile, fp, frame, 2.0, params)
        sig = apply_channel(out.signal, channel_preset(preset, sim_seed + 7))
        trace = preprocess(sig, ChunkParams(S=s_samples, d=1, T=PRESET_T[preset]))
        return trace_features(trace.values, FEATURE_LEN)

    feats, labels = [], []
    for c, (_, frame) in enumerate(patterns):
        feats.append(one_trace(fp_a, s_a, frame, "contact", seed * 977 + c))
        labels.append(c)
    refs = LabeledDataset(np.vstack(feats), np.array(labels),
                          ["screenA"] * len(labels), [n for n, _ in patterns])
    model = train_centroid(refs)

    total = correct = 0
    for c, (_, frame) in enumerate(patterns):
        for pi, preset in enumerate(presets):
            for k in range(per_pattern):
                sim_seed = seed * 7919 + c * 101 + k * 13 + pi * 47
                x = one_trace(fp_b, s_b, frame, preset, sim_seed)
                pred = int(np.argmax(predict_proba(model, x)))
                correct += int(pred == c)
                total += 1
    return {"correct": correct, "total": total}


# --------------------------------------------------------------------------
# keyboard snooping


def _preprocess_features(signal, chunk_params, align_ref=None):
    trace = preprocess(signal, chunk_params)
    feats = trace_features(trace.values, FEATURE_LEN)
    if align_ref is not None:
        feats = align_to_reference(align_ref, feats)
    return feats


def _sim_features_with_retry(profile, fingerprint, frame, seconds, chunk_params,
                             sim_seed, align_ref=None, channel=None, attempts=4):
    """Collection-time behavior: when preprocessing errors out (as it does on
    a few percent of real captures), record a fresh trace instead."""
    for attempt in range(attempts):
        out = simulate_trace(profile, fingerprint, frame, seconds,
                             sim_preset("standard", sim_seed + attempt * 900001))
        sig = out.signal
        if channel is not None:
            sig = apply_channel(sig, dataclasses.replace(channel,
                                                         seed=sim_seed + attempt))
        try:
            return _preprocess_features(sig, chunk_params, align_ref)
        except RasterleakError:
            continue
    raise RasterleakError(f"preprocessing failed {attempts} times (seed {sim_seed})")


def keyboard_setup(fp_seed: int = 1, seed: int = 0):
    """Shared fixtures of the snooping experiment: layout, grouping, cycle
    length estimate, and the alignment reference (unpressed keyboard)."""
    profile = get_profile("portrait22")
    layout = make_portrait_layout(profile)
    grouping = build_grouping(layout)
    fp = make_fingerprint(fp_seed)
    s_est = estimate_cycle_samples(profile, fp, seed=seed * 31 + 5)
    # mostly-white frames leave little envelope structure; run the chunker
    # with the wide drift window and mid-range threshold
    params = ChunkParams(S=s_est, d=3, T=0.75)
    align_ref = _sim_features_with_retry(profile, fp, render_keyboard_frame(layout),
                                         1.0, params, seed * 31 + 6)
    return profile, layout, grouping, fp, params, align_ref


def keyboard_dataset(setup, n_per_key: int, seed: int) -> LabeledDataset:
    profile, layout, grouping, fp, params, align_ref = setup
    feats, labels = [], []
    keys = sorted(layout.keys)
    for ki, key in enumerate(keys):
        frame = render_keyboard_frame(layout, key)
        for rep in range(n_per_key):
            sim_seed = seed * 65537 + ki * 257 + rep
            feats.append(_sim_features_with_retry(profile, fp, frame, 0.5, params,
                                                  sim_seed, align_ref))
            labels.append(grouping.key_to_group[key])
    return LabeledDataset(np.vstack(feats), np.array(labels),
                          ["kbd"] * len(labels), list(grouping.groups))


def train_keyboard_model(setup, n_train_per_key: int = 10, n_val_per_key: int = 3,
                         seed: int = 0, epochs: int = 220):
    train = keyboard_dataset(setup, n_train_per_key, seed)
    val = keyboard_dataset(setup, n_val_per_key, seed + 1)
    model = train_softmax(train, epochs=epochs, learn_rate=2.0, seed=seed)
    report = evaluate(model, val)
    return model, report


def simulate_typing(setup, word: str, dwell_s: float, seed: int):
    profile, layout, _grouping, fp, _params, _align = setup
    frames = [(render_keyboard_frame(layout, ch), dwell_s) for ch in word]
    return simulate_trace(profile, fp, frames, dwell_s * len(word),
                          sim_preset("standard", seed))


def snoop_word(setup, model, word: str, dwell_s: float, runlen_min: int, seed: int):
    profile, layout, grouping, fp, params, align_ref = setup
    out = simulate_typing(setup, word, dwell_s, seed)
    stride = params.S
    return snoop_stream(out.signal, model, grouping, params, runlen_min=runlen_min,
                        stride_samples=stride, align_ref=align_ref)


def _snoop_batch_worker(args):
    setup, model, word, dwell_s, runlen_min, seed = args
    return snoop_word(setup, model, word, dwell_s, runlen_min, seed)


def snoop_word_batch(setup, model, words: list, dwell_s: float, runlen_min: int,
                     seed: int, workers: int = 1) -> list:
    """Observed label sequences for a batch of typed words; optionally fans
    out across processes (windows are independent)."""
    jobs = [(setup, model, word, dwell_s, runlen_min, seed * 499 + i)
            for i, word in enumerate(words)]
    if workers <= 1:
        return [_snoop_batch_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_snoop_batch_worker, jobs, chunksize=4))


def pick_words(words: list, count: int, seed: int, min_len: int = 2,
               max_len: int = 12) -> list:
    pool = [w for w in words if min_len <= len(w) <= max_len and w.isalpha()]
    rng = np.random.default_rng(seed)
    return [pool[i] for i in rng.choice(len(pool), size=count, replace=False)]


# --------------------------------------------------------------------------
# text extraction


def text_setup(fp_seed: int = 2, seed: int = 0):
    profile = get_profile("portrait22")
    layout = make_char_layout(profile, slots=6, char_width_px=175)
    fp = make_fingerprint(fp_seed)
    s_est = estimate_cycle_samples(profile, fp, seed=seed * 37 + 3)
    params = ChunkParams(S=s_est, d=1, T=0.8)
    calib_frame = render_text_frame("A" * layout.slot_count, layout, profile)
    sim_params = sim_preset("standard", seed * 37 + 4)
    calib_trace = _text_trace_with_retry(profile, fp, calib_frame, params,
                                         seed * 37 + 4)
    calib = trace_features(calib_trace.values, FEATURE_LEN)
    predicted = predicted_cycle_envelope(profile, calib_frame, FEATURE_LEN, sim_params)
    anchor = calibrate_anchor(calib, predicted)
    return profile, layout, fp, params, calib, anchor


def random_letter_sequences(count: int, length: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return ["".join(LETTERS[i] for i in rng.integers(0, 26, length))
            for _ in range(count)]


def _text_trace_with_retry(profile, fp, frame, params, sim_seed, seconds=1.2,
                           attempts=4):
    for attempt in range(attempts):
        out = simulate_trace(profile, fp, frame, seconds,
                             sim_preset("standard", sim_seed + attempt * 900001))
        try:
            return preprocess(out.signal, params)
        except RasterleakError:
            continue
    raise RasterleakError(f"preprocessing failed {attempts} times (seed {sim_seed})")


def text_traces(setup, texts: list, seed: int, seconds: float = 1.2):
    """Per-slot aligned segments for each rendered text."""
    profile, layout, fp, params, calib, anchor = setup
    out_rows = []
    for i, text in enumerate(texts):
        frame = render_text_frame(text, layout, profile)
        trace = _text_trace_with_retry(profile, fp, frame, params,
                                       seed * 131071 + i, seconds)
        out_rows.append(slot_features(trace, layout, profile, anchor, calib,
                                      FEATURE_LEN))
    return out_rows


def train_text_models(setup, n_train: int = 780, n_val: int = 120, seed: int = 0,
                      epochs: int = 200):
    """One softmax per character slot, trained on full-length sequences."""
    profile, layout, fp, params, calib, anchor = setup
    slots = layout.slot_count
    train_texts = random_letter_sequences(n_train, slots, seed * 11 + 1)
    val_texts = random_letter_sequences(n_val, slots, seed * 11 + 2)
    train_rows = text_traces(setup, train_texts, seed * 11 + 3)
    val_rows = text_traces(setup, val_texts, seed * 11 + 4)

    models, val_acc = [], []
    for slot in range(slots):
        X = np.vstack([rows[slot] for rows in train_rows])
        y = np.array([ord(t[slot]) - ord("A") for t in train_texts])
        data = LabeledDataset(X, y, ["txt"] * len(y), LETTERS)
        model = train_softmax(data, epochs=epochs, learn_rate=2.0, seed=seed + slot)
        models.append(model)
        Xv = np.vstack([rows[slot] for rows in val_rows])
        yv = np.array([ord(t[slot]) - ord("A") for t in val_texts])
        val_acc.append(evaluate(model, LabeledDataset(Xv, yv, ["txt"] * len(yv),
                                                      LETTERS)).accuracy)
    return models, val_acc


def extract_words_experiment(setup, models, dictionary: list, seed: int = 0,
                             per_length: int = 25) -> dict:
    profile, layout, fp, params, calib, anchor = setup
    rng = np.random.default_rng(seed * 17 + 9)
    test_words = []
    for length in (3, 4, 5, 6):
        pool = [w for w in dictionary if len(w) == length and w.isalpha()]
        idx = rng.choice(len(pool), size=per_length, replace=False)
        test_words.extend(pool[i] for i in idx)

    top1 = top5 = 0
    for i, word in enumerate(test_words):
        frame = render_text_frame(word.upper(), layout, profile)
        out = simulate_trace(profile, fp, frame, 1.2,
                             sim_preset("standard", seed * 524287 + i))
        try:
            trace = preprocess(out.signal, params)
        except RasterleakError:
            continue
        ranked = extract_text(trace, models, dictionary, layout, profile, anchor,
                              calib, FEATURE_LEN).words()
        if ranked[:1] == [word]:
            top1 += 1
        if word in ranked[:5]:
            top5 += 1
    return {"top1": top1, "top5": top5, "total": len(test_words)}


# --------------------------------------------------------------------------
# website distinguishing


def website_frames(profile, n_classes: int, base_seed: int = 9000):
    return [lambda vs, c=c: make_website_frame(profile, base_seed + c, vs)
            for c in range(n_classes)]


def website_dataset(profile, fingerprint, s_est: int, n_classes: int, n_per_class: int,
                    seed: int, seconds: float = 2.0, align_ref=None,
                    screen_id: str = "scr", base_seed: int = 9000,
                    include_videochat: bool = False,
                    channel: str | None = None) -> LabeledDataset:
    """Carrier-path dataset: averaged-trace features per synthetic page."""
    params = ChunkParams(S=s_est, d=1, T=0.9)
    frames = website_frames(profile, n_classes, base_seed)
    names = [f"site{c:02d}" for c in range(n_classes)]
    if include_videochat:
        frames = frames + [lambda vs: make_videochat_frame(profile, vs)]
        names = names + ["videochat"]
    feats, labels = [], []
    chan = CHANNEL_PRESETS[channel] if channel is not None else None
    for c, frame_fn in enumerate(frames):
        for k in range(n_per_class):
            sim_seed = seed * 100003 + c * 1009 + k
            frame = frame_fn(sim_seed)
            feats.append(_sim_features_with_retry(profile, fingerprint, frame,
                                                  seconds, params, sim_seed,
                                                  align_ref, channel=chan))
            labels.append(c)
    return LabeledDataset(np.vstack(feats), np.array(labels),
                          [screen_id] * len(labels), names)


def website_align_reference(profile, fingerprint, s_est: int, seed: int,
                            seconds: float = 2.0):
    """Phase reference for a screen: its averaged trace of a fixed
    calibration page (class id far outside the experiment's range)."""
    params = ChunkParams(S=s_est, d=1, T=0.9)
    frame = make_website_frame(profile, 424242, 0)
    out = simulate_trace(profile, fingerprint, frame, seconds,
                         sim_preset("standard", seed))
    return trace_features(preprocess(out.signal, params).values, FEATURE_LEN)


def carrier_distinguish_experiment(n_classes: int = 25, n_train: int = 20,
                                   n_test: int = 10, fp_seed: int = 3,
                                   seed: int = 0, epochs: int = 260,
                                   threshold: float = 0.96) -> dict:
    profile = get_profile("desk22")
    fp = make_fingerprint(fp_seed)
    s_est = estimate_cycle_samples(profile, fp, seed=seed * 41 + 11)
    align_ref = website_align_reference(profile, fp, s_est, seed * 41 + 12)
    train = website_dataset(profile, fp, s_est, n_classes, n_train, seed * 41 + 13,
                            align_ref=align_ref)
    test = website_dataset(profile, fp, s_est, n_classes, n_test, seed * 41 + 14,
                           align_ref=align_ref)
    model = train_softmax(train, epochs=epochs, learn_rate=2.0, seed=seed)
    report = evaluate(model, test, threshold=threshold)
    thr, precision, recall = report.thresholded
    probs = None
    return {"accuracy": report.accuracy, "precision": precision, "recall": recall,
            "threshold": thr, "model": model, "report": report}


def voip_distinguish_experiment(n_sites: int = 10, n_train: int = 18, n_test: int = 8,
                                fp_seed: int = 4, seed: int = 0,
                                epochs: int = 150) -> dict:
    """Low-rate path: 6 s traces through the VoIP channel, classified on
    9-15 kHz FFT band features."""
    profile = get_profile("desk22")
    fp = make_fingerprint(fp_seed)
    names = [f"site{c:02d}" for c in range(n_sites)] + ["videochat"]

    def batch(n_per_class, seed0):
        feats, labels = [], []
        for c in range(n_sites + 1):
            for k in range(n_per_class):
                sim_seed = seed0 + c * 389 + k
                if c < n_sites:
                    frame = make_website_frame(profile, 9000 + c, sim_seed)
                else:
                    frame = make_videochat_frame(profile, sim_seed)
                out = simulate_trace(profile, fp, frame, 6.0,
                                     sim_preset("standard", sim_seed))
                sig = apply_channel(out.signal, channel_preset("voip", sim_seed + 3))
                fv = dsp.band_features(sig, 9000.0, 15000.0)
                feats.append(fv.values)
                labels.append(c)
        return LabeledDataset(np.vstack(feats), np.array(labels),
                              ["voip"] * len(labels), names)

    train = batch(n_train, seed * 53 + 17)
    test = batch(n_test, seed * 53 + 18)
    model = train_softmax(train, epochs=epochs, learn_rate=2.0, seed=seed)
    report = evaluate(model, test)
    return {"accuracy": report.accuracy, "model": model, "report": report}


# --------------------------------------------------------------------------
# cross-screen generalization


def cross_screen_experiment(seed: int = 0, n_classes: int = 8, n_screens: int = 5,
                            traces_per_class: int = 24, n_test: int = 10,
                            seconds: float = 1.5, epochs: int = 150) -> dict:
    """Train on several collections, evaluate on a held-out victim screen.

    Returns accuracies for: training on the victim itself, on all screens
    minus the victim, and on each single foreign screen.
    """
    profile = get_profile("desk22")
    fp_seeds = [seed * 100 + i + 1 for i in range(n_screens)]
    victim = f"screen{n_screens - 1}"

    datasets = {}
    test_set = None
    for i, fp_seed in enumerate(fp_seeds):
        sid = f"screen{i}"
        fp = make_fingerprint(fp_seed)
        s_est = true_cycle_samples(profile, fp)
        align_ref = website_align_reference(profile, fp, s_est, seed * 61 + i)
        n = traces_per_class + (n_test if sid == victim else 0)
        ds = website_dataset(profile, fp, s_est, n_classes, n, seed * 61 + 7 + i,
                             seconds=seconds, align_ref=align_ref, screen_id=sid)
        if sid == victim:
            per_class_rows = [np.nonzero(ds.labels == c)[0] for c in range(n_classes)]
            test_rows = np.concatenate([rows[-n_test:] for rows in per_class_rows])
            train_rows = np.concatenate([rows[:-n_test] for rows in per_class_rows])
            test_set = ds.take(test_rows)
            ds = ds.take(train_rows)
        datasets[sid] = ds

    def accuracy_for(collection: dict, quota: int, exclude=frozenset()):
        spec = MixSpec({sid: quota for sid in collection}, exclude=exclude)
        data = assemble_collection(collection, spec, seed=seed)
        model = train_softmax(data, epochs=epochs, learn_rate=2.0, seed=seed)
        return evaluate(model, test_set).accuracy

    foreign = {sid: ds for sid, ds in datasets.items() if sid != victim}
    result = {
        "self": accuracy_for({victim: datasets[victim]}, traces_per_class),
        "all_minus_victim": accuracy_for(
            foreign, max(1, traces_per_class // len(foreign))),
        "single_foreign": {sid: accuracy_for({sid: ds}, traces_per_class)
                           for sid, ds in foreign.items()},
    }
    result["single_foreign_mean"] = float(np.mean(list(result["single_foreign"].values())))
    return result


# --------------------------------------------------------------------------
# distance sweep and the speed-of-sound check


def distance_sweep_experiment(distances_cm=(1, 2, 5, 10, 20, 50, 100, 200, 300, 500),
                              seed: int = 0, seconds: float = 2.0) -> list:
    """Average chunk-to-mean correlation at each microphone distance; rows =
    (distance_cm, correlation)."""
    profile = get_profile("desk22")
    fp = null_fingerprint()
    frame = gen_zebra_frame(profile, 16, "square", punctured=True)
    out = simulate_trace(profile, fp, frame, seconds,
                         dataclasses.replace(SIM_PRESETS["standard"],
                                             noise_snr_db=None, seed=seed))
    rows = []
    for cm in distances_cm:
        channel = ChannelParams(distance_m=cm / 100.0, mic_noise_db=-48.0,
                                seed=seed + cm)
        sig = apply_channel(out.signal, channel)
        t = 0.9 if cm <= 100 else 0.5
        try:
            cs = demod_chunks(sig, ChunkParams(S=3200, d=1, T=t))
            corr = mean_chunk_correlation(cs)
        except RasterleakError:
            corr = 0.0
        rows.append((cm, corr))
    return rows


def delay_shift_experiment(seed: int = 0, distance_m: float = 1.0,
                           seconds: float = 2.0) -> dict:
    """Speed-of-sound sanity check: ground-truth (vsync) chunking preserves
    the acoustic delay as a rotation of the recovered cycle."""
    profile = get_profile("desk22")
    fp = null_fingerprint()
    frame = gen_zebra_frame(profile, 16, "square", punctured=True)
    params = dataclasses.replace(SIM_PRESETS["standard"], seed=seed)
    out = simulate_trace(profile, fp, frame, seconds, params)

    def gt_average(sig):
        env = dsp.demodulate(sig, 27500.0, 38000.0)
        return probe_average(env, out.cycle_starts)

    near = gt_average(apply_channel(out.signal, ChannelParams()))
    far = gt_average(apply_channel(out.signal, ChannelParams(distance_m=distance_m)))
    shift, corr = dsp.max_corr_shift(near, far)
    expected = round(192000.0 * distance_m / 343.0)
    return {"shift": int(shift), "expected": int(expected),
            "cycle_len": len(near), "corr": float(corr)}

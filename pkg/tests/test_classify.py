import numpy as np
import pytest

from rasterleak import classify
from rasterleak.classify import (CentroidModel, LabeledDataset, MixSpec, SoftmaxModel,
                                 assemble_collection, evaluate, predict_confident,
                                 predict_proba, read_model, train_centroid,
                                 train_softmax, write_model)
from rasterleak.errors import ParamError


def toy_dataset(n_per=20, seed=0, classes=2, d=5, screen="s0"):
    rng = np.random.default_rng(seed)
    X, y = [], []
    for c in range(classes):
        center = np.zeros(d)
        center[c % d] = 4.0
        X.append(center + rng.standard_normal((n_per, d)))
        y.extend([c] * n_per)
    return LabeledDataset(np.vstack(X), np.array(y), [screen] * (n_per * classes),
                          [f"c{c}" for c in range(classes)])


class TestSoftmax:
    def test_separable_reaches_full_accuracy(self):
        data = toy_dataset()
        model = train_softmax(data, epochs=500, learn_rate=1.0, seed=0)
        report = evaluate(model, data)
        assert report.accuracy == 1.0

    def test_deterministic(self):
        data = toy_dataset()
        a = train_softmax(data, epochs=50, seed=3)
        b = train_softmax(data, epochs=50, seed=3)
        assert np.array_equal(a.weights, b.weights)

    def test_loss_non_increasing(self):
        data = toy_dataset(seed=5)
        losses = []
        for epochs in (1, 5, 20, 100):
            losses.append(train_softmax(data, epochs=epochs, seed=1).train_meta["final_loss"])
        assert all(a >= b - 1e-12 for a, b in zip(losses, losses[1:]))

    def test_shuffled_labels_chance_level(self):
        rng = np.random.default_rng(7)
        data = toy_dataset(n_per=50, classes=4, d=8)
        shuffled = LabeledDataset(data.features, rng.permutation(data.labels),
                                  data.screen_ids, data.label_names)
        val = toy_dataset(n_per=25, classes=4, d=8, seed=99)
        model = train_softmax(shuffled, epochs=200, seed=0)
        assert evaluate(model, val).accuracy <= 3 * (1 / 4)

    def test_single_class_rejected(self):
        data = toy_dataset(classes=1)
        with pytest.raises(ParamError):
            train_softmax(data)

    def test_scale_invariance_of_argmax(self):
        data = toy_dataset(seed=11)
        val = toy_dataset(seed=12)
        m1 = train_softmax(data, epochs=100, seed=2)
        scaled = LabeledDataset(10.0 * data.features, data.labels, data.screen_ids,
                                data.label_names)
        m2 = train_softmax(scaled, epochs=100, seed=2)
        p1 = classify.predict_proba_batch(m1, val.features).argmax(axis=1)
        p2 = classify.predict_proba_batch(m2, 10.0 * val.features).argmax(axis=1)
        assert np.array_equal(p1, p2)


class TestCentroid:
    def test_single_sample_centroid_is_that_sample(self, rng):
        x = rng.standard_normal(64)
        data = LabeledDataset(x[None, :], np.array([0]), ["s"], ["only"])
        model = train_centroid(data)
        z = x - x.mean()
        z = z / np.linalg.norm(z)
        assert np.allclose(model.centroids[0], z)

    def test_rotated_copies_collapse(self, rng):
        base = rng.standard_normal(128)
        X = np.stack([np.roll(base, k) for k in (0, 5, 17)])
        data = LabeledDataset(X, np.zeros(3, int), ["s"] * 3, ["a"])
        model = train_centroid(data)
        from rasterleak.dsp import max_corr_shift
        _, corr = max_corr_shift(model.centroids[0], base)
        assert corr > 0.999999

    def test_identical_content_classes_are_ambiguous(self, rng):
        base = rng.standard_normal(64)
        X = np.stack([base, base])
        data = LabeledDataset(X, np.array([0, 1]), ["s"] * 2, ["a", "b"])
        model = train_centroid(data)
        probs = predict_proba(model, base)
        assert probs[0] == pytest.approx(probs[1], abs=1e-9)


class TestPredict:
    def test_probabilities_sum_to_one(self, rng):
        data = toy_dataset(classes=3, d=6)
        model = train_softmax(data, epochs=50, seed=0)
        probs = predict_proba(model, rng.standard_normal(6))
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_centroid_input_equal_to_centroid_wins(self, rng):
        X = rng.standard_normal((3, 32))
        data = LabeledDataset(X, np.arange(3), ["s"] * 3, ["a", "b", "c"])
        model = train_centroid(data)
        for c in range(3):
            probs = predict_proba(model, model.centroids[c])
            assert int(np.argmax(probs)) == c

    def test_zero_weight_model_uniform(self):
        model = SoftmaxModel(np.zeros((4, 6)), np.zeros(5), np.ones(5),
                             ["a", "b", "c", "d"])
        probs = predict_proba(model, np.ones(5))
        assert np.allclose(probs, 0.25)

    def test_length_mismatch(self):
        model = SoftmaxModel(np.zeros((2, 6)), np.zeros(5), np.ones(5), ["a", "b"])
        with pytest.raises(ParamError):
            predict_proba(model, np.ones(9))

    def test_confident_threshold_zero_is_argmax(self, rng):
        data = toy_dataset()
        model = train_softmax(data, epochs=100, seed=0)
        x = data.features[0]
        got = predict_confident(model, x, 0.0)
        assert got is not None
        assert got[0] == model.label_names[int(np.argmax(predict_proba(model, x)))]

    def test_uniform_output_below_high_threshold(self):
        model = SoftmaxModel(np.zeros((11, 4)), np.zeros(3), np.ones(3),
                             [f"c{i}" for i in range(11)])
        assert predict_confident(model, np.zeros(3), 0.96) is None


class TestEvaluate:
    def test_centroid_self_training_accuracy_one(self, rng):
        X = rng.standard_normal((4, 48))
        data = LabeledDataset(X, np.arange(4), ["s"] * 4, list("abcd"))
        model = train_centroid(data)
        assert evaluate(model, data).accuracy == 1.0

    def test_confusion_row_sums(self):
        data = toy_dataset(n_per=13, classes=3, d=6)
        model = train_softmax(data, epochs=50, seed=0)
        report = evaluate(model, data)
        assert np.array_equal(report.confusion.sum(axis=1), [13, 13, 13])

    def test_vacuous_precision_is_one(self):
        model = SoftmaxModel(np.zeros((4, 7)), np.zeros(6), np.ones(6),
                             [f"c{c}" for c in range(4)])
        data = toy_dataset(n_per=5, classes=4, d=6)
        report = evaluate(model, data, threshold=0.9999)
        threshold, precision, recall = report.thresholded
        assert precision == 1.0
        assert recall == 0.0

    def test_empty_data_rejected(self):
        model = SoftmaxModel(np.zeros((2, 4)), np.zeros(3), np.ones(3), ["a", "b"])
        empty = LabeledDataset(np.zeros((0, 3)), np.zeros(0, int), [], ["a", "b"])
        with pytest.raises(ParamError):
            evaluate(model, empty)


class TestAssembleCollection:
    def _screen_datasets(self, counts, classes=3, d=4, seed=0):
        rng = np.random.default_rng(seed)
        out = {}
        for sid, n_per in counts.items():
            X = rng.standard_normal((n_per * classes, d))
            y = np.repeat(np.arange(classes), n_per)
            out[sid] = LabeledDataset(X, y, [sid] * len(y),
                                      [f"c{c}" for c in range(classes)])
        return out

    def test_single_screen_quota(self):
        ds = self._screen_datasets({"s0": 60})
        got = assemble_collection(ds, MixSpec({"s0": 50}), seed=1)
        assert len(got.labels) == 50 * 3
        assert np.all(np.bincount(got.labels) == 50)

    def test_mixed_collection_totals(self):
        ds = self._screen_datasets({"a": 20, "b": 20, "c": 20, "d": 20})
        spec = MixSpec({"a": 12, "b": 12, "c": 12, "d": 12})
        got = assemble_collection(ds, spec, seed=2)
        assert np.all(np.bincount(got.labels) == 48)

    def test_exclusion(self):
        ds = self._screen_datasets({"a": 20, "b": 20, "v": 20})
        spec = MixSpec({"a": 10, "b": 10, "v": 10}, exclude=frozenset({"v"}))
        got = assemble_collection(ds, spec, seed=3)
        assert "v" not in set(got.screen_ids)

    def test_deterministic(self):
        ds = self._screen_datasets({"a": 30, "b": 30})
        spec = MixSpec({"a": 15, "b": 15})
        g1 = assemble_collection(ds, spec, seed=9)
        g2 = assemble_collection(ds, spec, seed=9)
        assert np.array_equal(g1.features, g2.features)

    def test_unsatisfiable_quota(self):
        ds = self._screen_datasets({"a": 5})
        with pytest.raises(ParamError):
            assemble_collection(ds, MixSpec({"a": 10}), seed=0)


class TestSerialization:
    def test_softmax_round_trip_bit_exact(self, tmp_path):
        data = toy_dataset(classes=3, d=6)
        model = train_softmax(data, epochs=80, seed=4)
        path = tmp_path / "m.txt"
        write_model(model, path)
        back = read_model(path)
        assert isinstance(back, SoftmaxModel)
        assert back.label_names == model.label_names
        x = data.features[7]
        assert np.array_equal(predict_proba(back, x), predict_proba(model, x))

    def test_centroid_round_trip(self, tmp_path, rng):
        X = rng.standard_normal((3, 32))
        data = LabeledDataset(X, np.arange(3), ["s"] * 3, ["a", "b", "c"])
        model = train_centroid(data)
        path = tmp_path / "c.txt"
        write_model(model, path)
        back = read_model(path)
        assert isinstance(back, CentroidModel)
        assert np.array_equal(back.centroids, model.centroids)


def test_trace_features_interpolation():
    vals = np.sin(np.linspace(0, 2 * np.pi, 100, endpoint=False))
    feat = classify.trace_features(vals, 50)
    assert len(feat) == 50
    assert np.allclose(feat, vals[::2], atol=1e-12)

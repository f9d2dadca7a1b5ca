from __future__ import annotations

import math

import numpy as np
import pytest

from horizonbench.classifier import (
    BOUNDARY,
    NEGATIVE,
    POSITIVE,
    REGION,
    ClassifierModel,
    PatchSample,
    TrainConfig,
    bce_gradient,
    bce_loss,
    dense_score_map,
    extract_patch,
    fit_logistic,
    load_model,
    load_score_map,
    sample_keypoints,
    save_model,
    save_score_map,
    sigmoid,
    train,
)
from horizonbench.errors import DataError


def _naive_patch(img, row, col):
    padded = np.pad(img, ((7, 8), (7, 8)), mode="edge")
    win = padded[row : row + 16, col : col + 16].ravel()
    sd = win.std()
    if sd == 0.0:
        return np.zeros(256)
    return (win - win.mean()) / sd


def _step_image():
    """Three horizontal bands: a bright sky, dark ground, lighter ground."""
    img = np.full((64, 60), 0.9)
    img[20:40] = 0.3
    img[40:] = 0.7
    return img, np.full(60, 20, dtype=np.int64)


def test_extract_patch_matches_padded_copy():
    rng = np.random.default_rng(2)
    img = rng.random((11, 9))
    for row in range(11):
        for col in range(9):
            assert np.array_equal(extract_patch(img, row, col), _naive_patch(img, row, col))


def test_extract_patch_constant_window_is_zero():
    assert np.array_equal(extract_patch(np.full((20, 20), 0.7), 10, 10), np.zeros(256))


def test_extract_patch_two_level_window():
    img = np.zeros((16, 16))
    img[8:] = 1.0
    feats = extract_patch(img, 7, 7)
    assert np.array_equal(np.unique(feats), [-1.0, 1.0])
    assert feats.sum() == 0.0


def test_train_config_validation():
    with pytest.raises(ValueError, match="learning_rate"):
        TrainConfig(learning_rate=0.0)
    with pytest.raises(ValueError, match="epochs"):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError, match="negative_margin"):
        TrainConfig(negative_margin=0)
    with pytest.raises(ValueError, match="positive_stride"):
        TrainConfig(positive_stride=0)


def test_boundary_sampling_positions_and_counts():
    img, sk = _step_image()
    samples = sample_keypoints(img, sk, TrainConfig(), BOUNDARY)
    assert len(samples) == 24
    positives, negatives = samples[:12], samples[12:]
    for k, sample in enumerate(positives):
        assert sample.label == POSITIVE
        assert np.array_equal(sample.features, extract_patch(img, 20, 5 * k))
    # the only eligible negatives are the band edge 19-20 rows below the horizon
    eligible = {extract_patch(img, r, c).tobytes() for r in (39, 40) for c in range(60)}
    for sample in negatives:
        assert sample.label == NEGATIVE
        assert sample.features.tobytes() in eligible


def test_region_sampling_labels_and_margins():
    img, sk = _step_image()
    samples = sample_keypoints(img, sk, TrainConfig(), REGION)
    assert len(samples) == 24
    sky_rows = {extract_patch(img, r, c).tobytes() for r in range(0, 13) for c in range(60)}
    for sample in samples[:12]:
        assert sample.label == POSITIVE
        assert sample.features.tobytes() in sky_rows
    assert all(s.label == NEGATIVE for s in samples[12:])


def test_sampling_is_deterministic():
    img, sk = _step_image()
    for mode in (BOUNDARY, REGION):
        a = sample_keypoints(img, sk, TrainConfig(seed=5), mode)
        b = sample_keypoints(img, sk, TrainConfig(seed=5), mode)
        assert [s.label for s in a] == [s.label for s in b]
        assert all(np.array_equal(x.features, y.features) for x, y in zip(a, b))


def test_sampling_rejects_degenerate_images():
    flat = np.full((64, 60), 0.5)
    sk = np.full(60, 20, dtype=np.int64)
    with pytest.raises(DataError, match="eligible negative"):
        sample_keypoints(flat, sk, TrainConfig(), BOUNDARY)
    img, _ = _step_image()
    near_top = np.full(60, 3, dtype=np.int64)
    with pytest.raises(DataError, match="eligible sky"):
        sample_keypoints(img, near_top, TrainConfig(), REGION)


def test_sampling_validates_the_skyline():
    img, sk = _step_image()
    with pytest.raises(ValueError, match="length"):
        sample_keypoints(img, sk[:-1], TrainConfig(), BOUNDARY)
    with pytest.raises(ValueError, match="bounds"):
        sample_keypoints(img, np.full(60, 64), TrainConfig(), BOUNDARY)
    with pytest.raises(ValueError, match="mode"):
        sample_keypoints(img, sk, TrainConfig(), "edges")


def test_sigmoid_range_and_midpoint():
    z = np.array([-40.0, -1.0, 0.0, 1.0, 40.0])
    s = sigmoid(z)
    assert s[2] == 0.5
    assert np.all(np.diff(s) > 0)
    assert 0.0 < s[0] < 1e-15 and 1.0 - 1e-15 < s[4] <= 1.0


def test_bce_loss_at_zero_parameters_is_log_two():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(12, 4))
    y = (rng.random(12) < 0.5).astype(float)
    assert abs(bce_loss(np.zeros(4), 0.0, X, y) - math.log(2.0)) < 1e-15


def test_bce_gradient_matches_finite_differences():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(30, 8))
    y = (rng.random(30) < 0.5).astype(float)
    eps = 1e-6
    for _ in range(5):
        w = rng.normal(size=8)
        b = float(rng.normal())
        gw, gb = bce_gradient(w, b, X, y)
        for j in range(8):
            e = np.zeros(8)
            e[j] = eps
            fd = (bce_loss(w + e, b, X, y) - bce_loss(w - e, b, X, y)) / (2 * eps)
            assert abs(fd - gw[j]) <= 1e-4 * max(1.0, abs(fd))
        fd = (bce_loss(w, b + eps, X, y) - bce_loss(w, b - eps, X, y)) / (2 * eps)
        assert abs(fd - gb) <= 1e-4 * max(1.0, abs(fd))


def test_fit_logistic_loss_never_increases():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(40, 6))
    y = (X[:, 0] + 0.3 * rng.normal(size=40) > 0).astype(float)
    _, _, losses = fit_logistic(X, y, 0.2, 200)
    assert len(losses) == 201
    assert losses[0] == pytest.approx(math.log(2.0), abs=1e-12)
    assert np.all(np.diff(losses) <= 1e-12)


def test_fit_logistic_label_flip_negates_parameters():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 16))
    y = (rng.random(40) < 0.5).astype(float)
    w1, b1, _ = fit_logistic(X, y, 0.2, 300)
    w2, b2, _ = fit_logistic(X, 1.0 - y, 0.2, 300)
    assert np.max(np.abs(w1 + w2)) < 1e-9
    assert abs(b1 + b2) < 1e-9


def test_fit_logistic_separates_a_separable_pair():
    X = np.zeros((2, 4))
    X[0, 0], X[1, 0] = 3.0, -3.0
    y = np.array([1.0, 0.0])
    w, b, _ = fit_logistic(X, y, 1.0, 300)
    pred = sigmoid(X @ w + b)
    assert pred[0] > 0.9 and pred[1] < 0.1


def test_train_validates_the_sample_set():
    rng = np.random.default_rng(1)
    ones = [PatchSample(features=rng.normal(size=256), label=POSITIVE) for _ in range(4)]
    with pytest.raises(ValueError, match="empty"):
        train([], TrainConfig())
    with pytest.raises(ValueError, match="both positive and negative"):
        train(ones, TrainConfig())


def test_train_separates_regions_by_local_structure():
    # sky shades smoothly down the rows, ground shades along the columns;
    # normalization strips brightness, leaving gradient orientation as cue
    img = np.tile((0.9 - 0.2 * np.arange(64) / 63.0)[:, None], (1, 60))
    img[32:] = np.tile(0.3 + 0.2 * np.arange(60) / 59.0, (32, 1))
    sk = np.full(60, 32, dtype=np.int64)
    model = train(sample_keypoints(img, sk, TrainConfig(), REGION), TrainConfig(epochs=150), REGION)
    assert model.mode == REGION
    scores = dense_score_map(img, model)
    assert scores[5].mean() > 0.7  # deep sky
    assert scores[58].mean() < 0.3  # deep ground


def test_dense_score_map_matches_per_pixel_scoring():
    rng = np.random.default_rng(11)
    img = rng.random((14, 11))
    model = ClassifierModel(mode=BOUNDARY, weights=rng.normal(size=256), bias=0.3)
    scores = dense_score_map(img, model)
    for r in range(14):
        for c in range(11):
            direct = sigmoid(model.weights @ extract_patch(img, r, c) + model.bias)
            assert abs(scores[r, c] - direct) < 1e-12


def test_dense_score_map_zero_weights_give_half():
    model = ClassifierModel(mode=BOUNDARY, weights=np.zeros(256), bias=0.0)
    scores = dense_score_map(np.random.default_rng(0).random((6, 7)), model)
    assert np.array_equal(scores, np.full((6, 7), 0.5))


def test_dense_score_map_increases_with_bias():
    rng = np.random.default_rng(12)
    img = rng.random((9, 9))
    w = rng.normal(size=256)
    low = dense_score_map(img, ClassifierModel(mode=BOUNDARY, weights=w, bias=-1.0))
    high = dense_score_map(img, ClassifierModel(mode=BOUNDARY, weights=w, bias=1.0))
    assert np.all(high > low)


def test_classifier_model_validation():
    with pytest.raises(ValueError, match="mode"):
        ClassifierModel(mode="other", weights=np.zeros(256), bias=0.0)
    with pytest.raises(ValueError, match="256"):
        ClassifierModel(mode=BOUNDARY, weights=np.zeros(10), bias=0.0)
    with pytest.raises(ValueError, match="finite"):
        ClassifierModel(mode=BOUNDARY, weights=np.zeros(256), bias=float("nan"))


def test_model_file_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(8)
    model = ClassifierModel(mode=REGION, weights=rng.normal(size=256), bias=float(rng.normal()))
    path = tmp_path / "model.txt"
    save_model(model, path)
    back = load_model(path)
    assert back.mode == model.mode
    assert back.bias == model.bias
    assert np.array_equal(back.weights, model.weights)


def test_load_model_rejects_malformed_files(tmp_path):
    path = tmp_path / "model.txt"
    good = ["HBMODEL v1", BOUNDARY, "0.0"] + ["0.1"] * 256

    path.write_text("\n".join(["WRONG"] + good[1:]) + "\n")
    with pytest.raises(DataError, match="bad model file"):
        load_model(path)
    path.write_text("\n".join(good[:100]) + "\n")
    with pytest.raises(DataError, match="bad model file"):
        load_model(path)
    path.write_text("\n".join([good[0], "edges"] + good[2:]) + "\n")
    with pytest.raises(DataError, match="mode"):
        load_model(path)
    path.write_text("\n".join(good[:3] + ["zero"] + good[4:]) + "\n")
    with pytest.raises(DataError, match="numeric"):
        load_model(path)
    path.write_text("\n".join(good[:3] + ["inf"] + good[4:]) + "\n")
    with pytest.raises(DataError, match="invalid model"):
        load_model(path)
    with pytest.raises(DataError, match="unreadable"):
        load_model(tmp_path / "missing.txt")


def test_score_map_roundtrip_is_float32_exact(tmp_path):
    rng = np.random.default_rng(14)
    scores = rng.random((7, 5))
    path = tmp_path / "scores.bin"
    save_score_map(scores, path)
    back = load_score_map(path)
    assert back.dtype == np.float64
    assert np.array_equal(back, scores.astype("<f4").astype(np.float64))


def test_load_score_map_rejects_malformed_files(tmp_path):
    path = tmp_path / "scores.bin"
    scores = np.full((3, 4), 0.25)
    save_score_map(scores, path)
    blob = path.read_bytes()

    path.write_bytes(b"NOTSCORES 3 4\n" + blob.split(b"\n", 1)[1])
    with pytest.raises(DataError, match="header"):
        load_score_map(path)
    path.write_bytes(blob[:-4])
    with pytest.raises(DataError, match="size"):
        load_score_map(path)
    save_score_map(np.full((3, 4), 1.5), path)
    with pytest.raises(DataError, match="outside"):
        load_score_map(path)
    with pytest.raises(DataError, match="unreadable"):
        load_score_map(tmp_path / "missing.bin")

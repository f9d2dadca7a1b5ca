from __future__ import annotations

import math

import numpy as np
import pytest

from horizonbench.metrics import (
    POPULATION,
    SAMPLE,
    ImageScore,
    LayerSpec,
    aggregate,
    conv_out_resolution,
    deconv_out_resolution,
    mean_accuracy,
    pixel_accuracy,
    pixel_distance,
)


def test_pixel_accuracy_identities():
    rng = np.random.default_rng(3)
    mask = rng.random((6, 9)) < 0.5
    assert pixel_accuracy(mask, mask) == 1.0
    assert pixel_accuracy(~mask, mask) == 0.0


def test_pixel_accuracy_counts_matches():
    gt = np.zeros((4, 4), dtype=bool)
    pred = gt.copy()
    pred[0, :] = True
    assert pixel_accuracy(pred, gt) == 0.75


def test_pixel_accuracy_validation():
    ok = np.zeros((2, 2), dtype=bool)
    with pytest.raises(ValueError, match="differ"):
        pixel_accuracy(ok, np.zeros((2, 3), dtype=bool))
    with pytest.raises(ValueError, match="boolean"):
        pixel_accuracy(ok.astype(int), ok)
    with pytest.raises(ValueError, match="non-empty"):
        pixel_accuracy(ok[:0], ok[:0])


def test_pixel_distance_identities():
    sk = np.array([3, 8, 1, 4])
    assert pixel_distance(sk, sk) == 0.0
    assert pixel_distance(sk + 5, sk) == 5.0
    assert pixel_distance(np.array([2, 5, 3]), np.array([2, 3, 4])) == 1.0


def test_pixel_distance_is_symmetric():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 50, 17)
    b = rng.integers(0, 50, 17)
    assert pixel_distance(a, b) == pixel_distance(b, a)


def test_pixel_distance_validation():
    with pytest.raises(ValueError, match="equal length"):
        pixel_distance(np.array([1, 2]), np.array([1, 2, 3]))
    with pytest.raises(ValueError, match="non-empty"):
        pixel_distance(np.array([]), np.array([]))


def test_mean_accuracy_weights_images_equally():
    scores = [
        ImageScore(accuracy=0.9, mean_abs_distance=1.0),
        ImageScore(accuracy=0.8, mean_abs_distance=2.0),
        ImageScore(accuracy=1.0, mean_abs_distance=0.0),
    ]
    assert mean_accuracy(scores) == pytest.approx(0.9, abs=1e-12)
    with pytest.raises(ValueError, match="empty"):
        mean_accuracy([])


def test_aggregate_population_spread():
    scores = [ImageScore(1.0, 2.0), ImageScore(0.5, 4.0)]
    agg = aggregate(scores)
    assert agg.mean_accuracy == 0.75
    assert agg.distance_mean == 3.0
    assert agg.distance_std == 1.0
    assert agg.n_images == 2


def test_aggregate_three_image_spread():
    scores = [ImageScore(1.0, 1.0), ImageScore(1.0, 2.0), ImageScore(1.0, 3.0)]
    agg = aggregate(scores)
    assert agg.distance_std == pytest.approx(math.sqrt(2.0 / 3.0), abs=1e-12)


def test_aggregate_sample_spread_is_opt_in():
    scores = [ImageScore(1.0, 2.0), ImageScore(0.5, 4.0)]
    agg = aggregate(scores, SAMPLE)
    assert agg.distance_std == pytest.approx(math.sqrt(2.0), abs=1e-12)
    with pytest.raises(ValueError, match="at least 2"):
        aggregate([ImageScore(1.0, 0.0)], SAMPLE)
    with pytest.raises(ValueError, match="std mode"):
        aggregate(scores, "bessel")


def test_aggregate_single_image():
    agg = aggregate([ImageScore(0.7, 3.5)], POPULATION)
    assert agg.distance_mean == 3.5
    assert agg.distance_std == 0.0


def test_aggregate_order_invariance():
    scores = [ImageScore(0.9, 1.0), ImageScore(0.8, 5.0), ImageScore(0.7, 2.0)]
    fwd = aggregate(scores)
    rev = aggregate(scores[::-1])
    assert fwd.mean_accuracy == pytest.approx(rev.mean_accuracy, abs=1e-15)
    assert fwd.distance_std == pytest.approx(rev.distance_std, abs=1e-15)


def test_conv_resolution_chain():
    assert conv_out_resolution(LayerSpec(224, 3, 1, 1)) == 224
    assert conv_out_resolution(LayerSpec(224, 2, 0, 2)) == 112
    assert conv_out_resolution(LayerSpec(7, 7, 0, 1)) == 1
    assert conv_out_resolution(LayerSpec(5, 1, 0, 1)) == 5


def test_conv_resolution_errors():
    with pytest.raises(ValueError, match="divide"):
        conv_out_resolution(LayerSpec(10, 4, 0, 4))
    with pytest.raises(ValueError, match="larger"):
        conv_out_resolution(LayerSpec(3, 7, 0, 1))


def test_deconv_resolution():
    assert deconv_out_resolution(LayerSpec(112, 2, 0, 2)) == 224
    assert deconv_out_resolution(LayerSpec(1, 1, 0, 1)) == 1
    with pytest.raises(ValueError, match="non-positive"):
        deconv_out_resolution(LayerSpec(5, 2, 3, 1))


def test_deconv_inverts_conv():
    rng = np.random.default_rng(7)
    for _ in range(50):
        out_res = int(rng.integers(1, 40))
        filt = int(rng.integers(1, 8))
        pad = int(rng.integers(0, 4))
        stride = int(rng.integers(1, 5))
        in_res = stride * (out_res - 1) + filt - 2 * pad
        if in_res < 1 or in_res - filt + 2 * pad < 0:
            continue
        assert conv_out_resolution(LayerSpec(in_res, filt, pad, stride)) == out_res
        assert deconv_out_resolution(LayerSpec(out_res, filt, pad, stride)) == in_res


def test_layer_spec_validation():
    with pytest.raises(ValueError, match="range"):
        LayerSpec(0, 3, 1, 1)
    with pytest.raises(ValueError, match="range"):
        LayerSpec(8, 3, -1, 1)
    with pytest.raises(ValueError, match="range"):
        LayerSpec(8, 3, 1, 0)

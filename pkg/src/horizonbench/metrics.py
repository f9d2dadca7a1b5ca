"""Segmentation accuracy, skyline distance, and layer resolution arithmetic.

Per-image scores aggregate across a dataset with every image weighted
equally, regardless of resolution. The distance spread defaults to the
population standard deviation; sample standard deviation is opt-in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

POPULATION = "population"
SAMPLE = "sample"


@dataclass(frozen=True)
class ImageScore:
    accuracy: float
    mean_abs_distance: float


@dataclass(frozen=True)
class DatasetScore:
    mean_accuracy: float
    distance_mean: float
    distance_std: float
    n_images: int


@dataclass(frozen=True)
class LayerSpec:
    in_res: int
    filter: int
    pad: int
    stride: int

    def __post_init__(self) -> None:
        if self.in_res < 1 or self.filter < 1 or self.stride < 1 or self.pad < 0:
            raise ValueError("layer spec fields out of range")


def pixel_accuracy(pred: np.ndarray, gt: np.ndarray) -> float:
    """Fraction of pixels whose predicted label matches the ground truth."""
    p = np.asarray(pred)
    g = np.asarray(gt)
    if p.shape != g.shape:
        raise ValueError(f"mask shapes differ: {p.shape} vs {g.shape}")
    if p.ndim != 2 or p.size == 0 or p.dtype != np.bool_ or g.dtype != np.bool_:
        raise ValueError("masks must be non-empty 2-D boolean arrays")
    return float(np.count_nonzero(p == g)) / p.size


def pixel_distance(pred: np.ndarray, gt: np.ndarray) -> float:
    """Mean absolute vertical offset between two skylines, in pixels."""
    p = np.asarray(pred, dtype=np.int64)
    g = np.asarray(gt, dtype=np.int64)
    if p.shape != g.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("skylines must be non-empty and of equal length")
    return float(np.mean(np.abs(p - g)))


def mean_accuracy(scores: list[ImageScore]) -> float:
    """Unweighted mean of per-image accuracies."""
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    return float(np.mean([s.accuracy for s in scores]))


def aggregate(scores: list[ImageScore], std_mode: str = POPULATION) -> DatasetScore:
    """Dataset-level accuracy mean and distance mean/spread over images."""
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    if std_mode not in (POPULATION, SAMPLE):
        raise ValueError(f"unknown std mode {std_mode!r}")
    distances = np.asarray([s.mean_abs_distance for s in scores])
    if std_mode == SAMPLE and distances.size < 2:
        raise ValueError("sample standard deviation needs at least 2 images")
    ddof = 0 if std_mode == POPULATION else 1
    return DatasetScore(
        mean_accuracy=mean_accuracy(scores),
        distance_mean=float(distances.mean()),
        distance_std=float(distances.std(ddof=ddof)),
        n_images=len(scores),
    )


def conv_out_resolution(spec: LayerSpec) -> int:
    """Output resolution of a convolution layer: (I - F + 2P) / S + 1."""
    numer = spec.in_res - spec.filter + 2 * spec.pad
    if numer < 0:
        raise ValueError("filter larger than padded input")
    if numer % spec.stride != 0:
        raise ValueError(f"stride {spec.stride} does not divide {numer}")
    return numer // spec.stride + 1


def deconv_out_resolution(spec: LayerSpec) -> int:
    """Output resolution of a transposed convolution: S(I - 1) + F - 2P."""
    out = spec.stride * (spec.in_res - 1) + spec.filter - 2 * spec.pad
    if out < 1:
        raise ValueError("layer configuration yields a non-positive resolution")
    return out

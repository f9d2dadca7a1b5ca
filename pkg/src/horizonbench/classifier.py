"""Patch sampling, logistic-regression training, and dense score maps.

Two labeling modes share the same 16x16 normalized-intensity features:

* ``boundary`` mode labels patches centered on the horizon as positive and
  off-horizon edge patches as negative; scores read as horizon-ness.
* ``region`` mode labels sky-region patches positive and ground-region
  patches negative; scores read as sky-ness and feed the energy extractor's
  per-column data term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DataError
from .imagecore import gradient_field

BOUNDARY = "boundary"
REGION = "region"

POSITIVE = 1
NEGATIVE = 0

PATCH_SIZE = 16
_HALF_LO = 7  # window spans rows [r-7, r+8]
_FEATURES = PATCH_SIZE * PATCH_SIZE

_MIN_ELIGIBLE = 10


@dataclass(frozen=True)
class PatchSample:
    features: np.ndarray  # 256 normalized intensities
    label: int  # POSITIVE or NEGATIVE


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.2
    epochs: int = 300
    seed: int = 0
    negative_margin: int = 8
    edge_threshold: float = 0.1
    positive_stride: int = 5

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.negative_margin < 1:
            raise ValueError("negative_margin must be at least 1")
        if self.positive_stride < 1:
            raise ValueError("positive_stride must be at least 1")


@dataclass(frozen=True)
class ClassifierModel:
    mode: str
    weights: np.ndarray
    bias: float

    def __post_init__(self) -> None:
        if self.mode not in (BOUNDARY, REGION):
            raise ValueError(f"unknown mode {self.mode!r}")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (_FEATURES,):
            raise ValueError(f"weights must have {_FEATURES} entries")
        if not (np.isfinite(w).all() and np.isfinite(self.bias)):
            raise ValueError("model parameters must be finite")
        object.__setattr__(self, "weights", w)


def extract_patch(img: np.ndarray, row: int, col: int) -> np.ndarray:
    """16x16 normalized intensity window centered at (row, col).

    The window's top-left corner sits at (row-7, col-7); borders replicate
    the nearest pixel. Features are normalized to zero mean and unit standard
    deviation; a constant window yields the all-zeros vector.
    """
    a = np.asarray(img, dtype=np.float64)
    rows, cols = a.shape
    ridx = np.clip(np.arange(row - _HALF_LO, row - _HALF_LO + PATCH_SIZE), 0, rows - 1)
    cidx = np.clip(np.arange(col - _HALF_LO, col - _HALF_LO + PATCH_SIZE), 0, cols - 1)
    win = a[np.ix_(ridx, cidx)].ravel()
    # Constancy is judged on the raw values; the rounded std of a constant
    # window need not be exactly zero.
    if win.max() == win.min():
        return np.zeros(_FEATURES)
    return (win - win.mean()) / win.std()


def sample_keypoints(
    img: np.ndarray,
    gt_skyline: np.ndarray,
    cfg: TrainConfig,
    mode: str = BOUNDARY,
) -> list[PatchSample]:
    """Draw labeled patch samples from one image given its horizon.

    Boundary mode places positives on the horizon at every
    ``cfg.positive_stride``-th column and draws an equal number of negatives
    from edge pixels (gradient magnitude >= ``cfg.edge_threshold``) whose
    vertical distance to the horizon exceeds ``cfg.negative_margin``.

    Region mode draws equal numbers of sky and ground pixels at least
    ``cfg.negative_margin`` rows away from the horizon; sky is positive.
    """
    a = np.asarray(img, dtype=np.float64)
    rows, cols = a.shape
    sk = np.asarray(gt_skyline)
    if sk.shape != (cols,):
        raise ValueError("skyline length must equal image width")
    if np.any(sk < 0) or np.any(sk >= rows):
        raise ValueError("skyline rows out of image bounds")
    rng = np.random.default_rng(cfg.seed)
    n_target = len(range(0, cols, cfg.positive_stride))
    row_grid = np.arange(rows)[:, None]
    dist = row_grid - sk[None, :]  # signed row distance to the horizon

    if mode == BOUNDARY:
        positives = [
            PatchSample(extract_patch(a, int(sk[j]), j), POSITIVE)
            for j in range(0, cols, cfg.positive_stride)
        ]
        grad = gradient_field(a)
        eligible = (grad.magnitude >= cfg.edge_threshold) & (np.abs(dist) > cfg.negative_margin)
        negatives = _draw(a, eligible, n_target, rng, NEGATIVE, "negative")
        return positives + negatives
    if mode == REGION:
        sky_ok = dist <= -cfg.negative_margin
        ground_ok = dist >= cfg.negative_margin
        sky = _draw(a, sky_ok, n_target, rng, POSITIVE, "sky")
        ground = _draw(a, ground_ok, n_target, rng, NEGATIVE, "ground")
        return sky + ground
    raise ValueError(f"unknown mode {mode!r}")


def _draw(img, eligible, count, rng, label, kind) -> list[PatchSample]:
    flat = np.flatnonzero(eligible)
    if flat.size < _MIN_ELIGIBLE:
        raise DataError(f"degenerate image: only {flat.size} eligible {kind} pixels")
    picks = rng.choice(flat.size, size=count, replace=flat.size < count)
    cols = img.shape[1]
    return [
        PatchSample(extract_patch(img, int(p // cols), int(p % cols)), label)
        for p in flat[picks]
    ]


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_loss(weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy, computed in the stable log-sum-exp form."""
    z = X @ weights + bias
    return float(np.mean(y * np.logaddexp(0.0, -z) + (1.0 - y) * np.logaddexp(0.0, z)))


def bce_gradient(
    weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, float]:
    """Analytic gradient of bce_loss with respect to (weights, bias)."""
    residual = sigmoid(X @ weights + bias) - y
    n = X.shape[0]
    return X.T @ residual / n, float(residual.mean())


def fit_logistic(
    X: np.ndarray, y: np.ndarray, learning_rate: float, epochs: int
) -> tuple[np.ndarray, float, list[float]]:
    """Full-batch gradient descent from zero init; returns (w, b, losses).

    losses[0] is the initial loss and losses[e] the loss after epoch e.
    """
    w = np.zeros(X.shape[1])
    b = 0.0
    losses = [bce_loss(w, b, X, y)]
    for _ in range(epochs):
        dw, db = bce_gradient(w, b, X, y)
        w = w - learning_rate * dw
        b = b - learning_rate * db
        losses.append(bce_loss(w, b, X, y))
    return w, b, losses


def train(samples: list[PatchSample], cfg: TrainConfig, mode: str = BOUNDARY) -> ClassifierModel:
    """Fit the logistic patch classifier on pooled samples."""
    if not samples:
        raise ValueError("cannot train on an empty sample set")
    X = np.stack([s.features for s in samples])
    y = np.asarray([s.label for s in samples], dtype=np.float64)
    if y.min() == y.max():
        raise ValueError("training needs both positive and negative samples")
    w, b, _ = fit_logistic(X, y, cfg.learning_rate, cfg.epochs)
    if not (np.isfinite(w).all() and np.isfinite(b)):
        raise ValueError("training diverged to non-finite parameters; lower learning_rate")
    return ClassifierModel(mode=mode, weights=w, bias=b)


def dense_score_map(img: np.ndarray, model: ClassifierModel) -> np.ndarray:
    """Classifier probability for every pixel's centered patch.

    Equivalent to sigmoid(w . extract_patch(img, r, c) + b) at each pixel,
    vectorized one image row at a time over sliding windows.
    """
    a = np.asarray(img, dtype=np.float64)
    rows, cols = a.shape
    padded = np.pad(a, ((_HALF_LO, PATCH_SIZE - 1 - _HALF_LO),) * 2, mode="edge")
    windows = sliding_window_view(padded, (PATCH_SIZE, PATCH_SIZE))
    w = model.weights
    scores = np.empty((rows, cols))
    for r in range(rows):
        win = windows[r].reshape(cols, _FEATURES)
        # Same constancy rule as extract_patch: flat windows contribute a
        # zero feature vector, never a rounding-amplified one.
        flat = win.max(axis=1) == win.min(axis=1)
        mu = win.mean(axis=1)
        sd = np.where(flat, 1.0, win.std(axis=1))
        z = np.where(flat, 0.0, (win - mu[:, None]) @ w / sd) + model.bias
        scores[r] = sigmoid(z)
    return scores


_MODEL_MAGIC = "HBMODEL v1"
_SCORE_MAGIC = b"HBSCORE v1"


def save_model(model: ClassifierModel, path: str | Path) -> None:
    """Write the text model format: magic, mode, bias, then 256 weights."""
    lines = [_MODEL_MAGIC, model.mode, f"{model.bias:.17g}"]
    lines += [f"{v:.17g}" for v in model.weights]
    Path(path).write_text("\n".join(lines) + "\n")


def load_model(path: str | Path) -> ClassifierModel:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise DataError(f"unreadable model {path}: {exc}") from exc
    if len(lines) != 3 + _FEATURES or lines[0] != _MODEL_MAGIC:
        raise DataError(f"bad model file {path}")
    mode = lines[1]
    if mode not in (BOUNDARY, REGION):
        raise DataError(f"bad model mode {mode!r} in {path}")
    try:
        bias = float(lines[2])
        weights = np.asarray([float(v) for v in lines[3:]], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"bad numeric value in model {path}: {exc}") from exc
    try:
        return ClassifierModel(mode=mode, weights=weights, bias=bias)
    except ValueError as exc:
        raise DataError(f"invalid model {path}: {exc}") from exc


def save_score_map(scores: np.ndarray, path: str | Path) -> None:
    """Binary score map: ASCII header then row-major little-endian float32."""
    a = np.asarray(scores, dtype=np.float64)
    rows, cols = a.shape
    with open(path, "wb") as fh:
        fh.write(f"HBSCORE v1 {rows} {cols}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(a, dtype="<f4").tobytes())


def load_score_map(path: str | Path) -> np.ndarray:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"unreadable score map {path}: {exc}") from exc
    nl = blob.find(b"\n")
    header = blob[:nl].split() if nl > 0 else []
    if len(header) != 4 or b" ".join(header[:2]) != _SCORE_MAGIC:
        raise DataError(f"bad score map header in {path}")
    try:
        rows, cols = int(header[2]), int(header[3])
    except ValueError as exc:
        raise DataError(f"bad score map dimensions in {path}") from exc
    body = blob[nl + 1 :]
    if rows < 1 or cols < 1 or len(body) != rows * cols * 4:
        raise DataError(f"score map {path} payload size mismatch")
    scores = np.frombuffer(body, dtype="<f4").astype(np.float64).reshape(rows, cols)
    if not np.isfinite(scores).all() or scores.min() < 0.0 or scores.max() > 1.0:
        raise DataError(f"score map {path} has values outside [0, 1]")
    return scores

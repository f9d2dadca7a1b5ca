"""Image, mask, and skyline representations with file I/O and gradients.

Conventions used throughout the package:

* grayscale images are 2-D float64 arrays, shape (rows, cols), values in [0, 1]
* binary masks are 2-D bool arrays where True marks non-sky (foreground) and
  False marks sky, matching the on-disk encoding 255 = non-sky, 0 = sky
* skylines are 1-D int64 arrays with one row index per image column, the row
  of the topmost non-sky pixel in that column

All functions are pure and operate on immutable inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DataError

SKY = False
NONSKY = True

# Rec.601 luma weights for RGB inputs.
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradient magnitude and orientation (radians, (-pi, pi])."""

    magnitude: np.ndarray
    orientation: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitude.shape


def load_gray_image(path: str | Path) -> np.ndarray:
    """Load an 8-bit grayscale or RGB image (PNG/PGM) as floats in [0, 1].

    RGB inputs are reduced to luminance with weights 0.299/0.587/0.114.
    """
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if im.width == 0 or im.height == 0:
                raise DataError(f"zero-sized image: {path}")
            if mode == "L":
                arr = np.asarray(im, dtype=np.float64)
                return arr / 255.0
            if mode == "RGB":
                rgb = np.asarray(im, dtype=np.float64)
                luma = _LUMA_R * rgb[..., 0] + _LUMA_G * rgb[..., 1] + _LUMA_B * rgb[..., 2]
                return luma / 255.0
            raise DataError(f"unsupported image mode {mode!r} (need 8-bit gray or RGB): {path}")
    except (UnidentifiedImageError, OSError) as exc:
        raise DataError(f"unreadable image {path}: {exc}") from exc


def save_gray_image(img: np.ndarray, path: str | Path) -> None:
    """Write a [0, 1] grayscale array as an 8-bit grayscale PNG."""
    quantized = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(quantized, mode="L").save(path)


def mask_from_skyline(skyline: np.ndarray, rows: int) -> np.ndarray:
    """Expand a skyline into a mask: non-sky at and below the horizon row."""
    sk = np.asarray(skyline)
    if sk.ndim != 1 or sk.size == 0:
        raise ValueError("skyline must be a non-empty 1-D array")
    if rows < 1:
        raise ValueError("rows must be positive")
    if np.any(sk < 0) or np.any(sk >= rows):
        raise ValueError(f"skyline entry out of bounds for {rows} rows")
    return np.arange(rows)[:, None] >= sk[None, :]


def skyline_from_mask(mask: np.ndarray) -> np.ndarray:
    """Row of the first non-sky pixel from the top, per column.

    Raises ValueError if some column contains no non-sky pixel; callers that
    must always produce a horizon can use skyline_from_mask_clamped instead.
    """
    m = np.asarray(mask, dtype=bool)
    has_nonsky = m.any(axis=0)
    if not has_nonsky.all():
        missing = int(np.flatnonzero(~has_nonsky)[0])
        raise ValueError(f"column {missing} contains no non-sky pixel")
    return np.argmax(m, axis=0).astype(np.int64)


def skyline_from_mask_clamped(mask: np.ndarray) -> np.ndarray:
    """Like skyline_from_mask but empty columns clamp to the bottom row."""
    m = np.asarray(mask, dtype=bool)
    rows = m.shape[0]
    sky = np.argmax(m, axis=0).astype(np.int64)
    sky[~m.any(axis=0)] = rows - 1
    return sky


def gradient_field(img: np.ndarray) -> GradientField:
    """3x3 Sobel gradients with replicate border padding.

    Kernels are scaled by 1/4 so a unit step edge produces magnitude exactly
    1.0 on the rows (or columns) adjacent to the step. Orientation is
    atan2(gy, gx) with gy positive when brightness increases downward.
    """
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 3 or a.shape[1] < 3:
        raise ValueError("image must be at least 3x3 for the Sobel kernel")
    p = np.pad(a, 1, mode="edge")
    tl, tc, tr = p[:-2, :-2], p[:-2, 1:-1], p[:-2, 2:]
    ml, mr = p[1:-1, :-2], p[1:-1, 2:]
    bl, bc, br = p[2:, :-2], p[2:, 1:-1], p[2:, 2:]
    gx = ((tr - tl) + 2.0 * (mr - ml) + (br - bl)) / 4.0
    gy = ((bl - tl) + 2.0 * (bc - tc) + (br - tr)) / 4.0
    magnitude = np.hypot(gx, gy)
    # adding +0.0 normalizes -0.0 so the orientation range is (-pi, pi]
    orientation = np.arctan2(gy + 0.0, gx + 0.0)
    return GradientField(magnitude=magnitude, orientation=orientation)


def save_mask(mask: np.ndarray, path: str | Path) -> None:
    """Write a mask as an 8-bit grayscale PNG, 0 = sky, 255 = non-sky."""
    m = np.asarray(mask, dtype=bool)
    Image.fromarray(np.where(m, 255, 0).astype(np.uint8), mode="L").save(path)


def load_mask(path: str | Path) -> np.ndarray:
    """Load a {0, 255} grayscale PNG mask; any other pixel value is an error."""
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode != "L":
                raise DataError(f"mask {path} is not 8-bit grayscale (mode {im.mode!r})")
            arr = np.asarray(im, dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as exc:
        raise DataError(f"unreadable mask {path}: {exc}") from exc
    bad = (arr != 0) & (arr != 255)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise DataError(f"mask {path} has pixel value {arr[r, c]} at ({r}, {c}), expected 0 or 255")
    return arr == 255


def save_skyline(skyline: np.ndarray, path: str | Path) -> None:
    """Write a skyline as CSV with header 'column,row', columns ascending."""
    sk = np.asarray(skyline)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["column", "row"])
        for col, row in enumerate(sk):
            writer.writerow([col, int(row)])


def load_skyline(path: str | Path) -> np.ndarray:
    """Read a skyline CSV written by save_skyline."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["column", "row"]:
                raise DataError(f"bad skyline header in {path}: {header}")
            rows = []
            for i, rec in enumerate(reader):
                try:
                    ok = len(rec) == 2 and int(rec[0]) == i
                    row = int(rec[1]) if ok else 0
                except ValueError:
                    ok = False
                if not ok:
                    raise DataError(f"skyline {path} columns must ascend from 0 (record {rec})")
                rows.append(row)
    except OSError as exc:
        raise DataError(f"unreadable skyline {path}: {exc}") from exc
    if not rows:
        raise DataError(f"skyline {path} has no data rows")
    return np.asarray(rows, dtype=np.int64)

"""Morphological cleanup for binary sky masks.

Masks follow the shared convention: False is sky, True is non-sky. Two
pipelines are exposed:

* ``postprocess_I``: fill enclosed sky holes, then drop small non-sky blobs.
* ``postprocess_II``: drop small non-sky blobs, then snap every column so
  all pixels below its first non-sky pixel are non-sky.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .imagecore import NONSKY, SKY

_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


@dataclass(frozen=True)
class ComponentLabeling:
    labels: np.ndarray  # 0 outside the target class, 1..count for components
    count: int
    areas: np.ndarray  # pixel count per component id; entry 0 is always 0


def _check_mask(mask: np.ndarray) -> np.ndarray:
    a = np.asarray(mask)
    if a.ndim != 2 or a.size == 0 or a.dtype != np.bool_:
        raise ValueError("mask must be a non-empty 2-D boolean array")
    return a


def connected_components(
    mask: np.ndarray, target: bool = NONSKY, connectivity: int = 4
) -> ComponentLabeling:
    """Label target-class regions; ids follow raster order of first pixels."""
    a = _check_mask(mask)
    if connectivity not in _STRUCTURES:
        raise ValueError("connectivity must be 4 or 8")
    raw, count = ndimage.label(a == target, structure=_STRUCTURES[connectivity])
    flat = raw.ravel()
    ids, first = np.unique(flat[flat > 0], return_index=True)
    remap = np.zeros(count + 1, dtype=np.int64)
    remap[ids[np.argsort(first)]] = np.arange(1, count + 1)
    labels = remap[raw]
    areas = np.bincount(labels.ravel(), minlength=count + 1)
    areas[0] = 0
    return ComponentLabeling(labels=labels, count=count, areas=areas)


def fill_holes(mask: np.ndarray, connectivity: int = 4) -> np.ndarray:
    """Turn sky regions that touch no image border into non-sky."""
    a = _check_mask(mask)
    sky = connected_components(a, SKY, connectivity)
    border = np.unique(
        np.concatenate(
            [sky.labels[0], sky.labels[-1], sky.labels[:, 0], sky.labels[:, -1]]
        )
    )
    keep = np.zeros(sky.count + 1, dtype=bool)
    keep[border[border > 0]] = True
    out = a.copy()
    out[(sky.labels > 0) & ~keep[sky.labels]] = NONSKY
    return out


def remove_small_nonsky(mask: np.ndarray, connectivity: int = 4) -> np.ndarray:
    """Turn non-sky regions smaller than half the largest one into sky.

    A region of area a is removed when 2*a < A, with A the largest non-sky
    region's area; the comparison is exact integer arithmetic.
    """
    a = _check_mask(mask)
    comp = connected_components(a, NONSKY, connectivity)
    if comp.count == 0:
        return a.copy()
    largest = int(comp.areas[1:].max())
    small = 2 * comp.areas < largest
    small[0] = False
    out = a.copy()
    out[small[comp.labels]] = SKY
    return out


def column_snap(mask: np.ndarray) -> np.ndarray:
    """Force every pixel below a column's first non-sky pixel to non-sky."""
    return np.logical_or.accumulate(_check_mask(mask), axis=0)


def postprocess_I(mask: np.ndarray, connectivity: int = 4) -> np.ndarray:
    return remove_small_nonsky(fill_holes(mask, connectivity), connectivity)


def postprocess_II(mask: np.ndarray, connectivity: int = 4) -> np.ndarray:
    return column_snap(remove_small_nonsky(mask, connectivity))

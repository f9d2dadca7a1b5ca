"""Skyline extraction as a minimum-cost left-to-right path over score maps.

Both extractors pick one row per column under a hard vertical jump window
and are solved exactly by dynamic programming. Ties are broken toward the
lexicographically smallest row sequence so results are reproducible.

* ``dcsi`` mode walks a horizon-ness score map: node cost 1 - score plus a
  per-jump penalty.
* ``energy`` mode walks a sky-ness score map: each column pays the negative
  log-likelihood of labeling rows above the path sky and rows below ground,
  plus the jump penalty, minus a reward for sitting on strong gradients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import GradientField

DCSI = "dcsi"
ENERGY = "energy"


@dataclass(frozen=True)
class DpConfig:
    variant: str = DCSI
    delta: int = 40
    jump_weight: float = 0.05
    edge_weight: float = 1.0
    likelihood_floor: float = 1e-6

    def __post_init__(self) -> None:
        if self.variant not in (DCSI, ENERGY):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.delta < 1:
            raise ValueError("delta must be at least 1")
        if self.jump_weight < 0:
            raise ValueError("jump_weight must be non-negative")
        if self.edge_weight < 0:
            raise ValueError("edge_weight must be non-negative")
        if not 0.0 < self.likelihood_floor < 0.5:
            raise ValueError("likelihood_floor must lie in (0, 0.5)")


@dataclass(frozen=True)
class PathResult:
    skyline: np.ndarray  # chosen row per column
    total_cost: float


def _check_scores(scores: np.ndarray) -> np.ndarray:
    a = np.asarray(scores, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("score map must be a non-empty 2-D array")
    if not np.isfinite(a).all() or a.min() < 0.0 or a.max() > 1.0:
        raise ValueError("score map values must be finite and within [0, 1]")
    return a


def energy_data_term(scores: np.ndarray, likelihood_floor: float) -> np.ndarray:
    """Per-column cost of putting the path at each row.

    Row r as the path means rows above r are sky and rows r and below are
    ground; the cost is the summed negative log-likelihood of that split.
    Likelihoods are clamped away from 0 and 1 by ``likelihood_floor``.
    Computed with column prefix sums, one pass over the map.
    """
    p = np.clip(_check_scores(scores), likelihood_floor, 1.0 - likelihood_floor)
    log_sky = np.log(p)
    log_ground = np.log1p(-p)
    rows = p.shape[0]
    # prefix[r] = sum over rows < r, so prefix needs a leading zero row
    sky_above = np.vstack([np.zeros(p.shape[1]), np.cumsum(log_sky, axis=0)])[:rows]
    ground_prefix = np.vstack([np.zeros(p.shape[1]), np.cumsum(log_ground, axis=0)])[:rows]
    ground_below = log_ground.sum(axis=0)[None, :] - ground_prefix
    return -(sky_above + ground_below)


def _dp_min_path(node_cost: np.ndarray, delta: int, jump_weight: float) -> np.ndarray:
    """Exact DP over one-row-per-column paths with |row jump| <= delta.

    Backward pass fills cost-to-go; the forward pass re-selects the first
    (smallest-row) minimizer at every column, which yields the
    lexicographically smallest minimum-cost path.
    """
    rows, cols = node_cost.shape
    togo = np.empty_like(node_cost)
    togo[:, -1] = node_cost[:, -1]
    best = np.empty(rows)
    for c in range(cols - 2, -1, -1):
        best.fill(np.inf)
        for d in range(-delta, delta + 1):
            lo = max(0, -d)
            hi = min(rows, rows - d)
            if lo >= hi:
                continue
            np.minimum(
                best[lo:hi],
                togo[lo + d : hi + d, c + 1] + jump_weight * abs(d),
                out=best[lo:hi],
            )
        togo[:, c] = node_cost[:, c] + best
    path = np.empty(cols, dtype=np.int64)
    r = int(np.argmin(togo[:, 0]))
    path[0] = r
    for c in range(1, cols):
        lo = max(0, r - delta)
        hi = min(rows, r + delta + 1)
        step = togo[lo:hi, c] + jump_weight * np.abs(np.arange(lo, hi) - r)
        r = lo + int(np.argmin(step))
        path[c] = r
    return path


def _jump_total(path: np.ndarray) -> int:
    return int(np.abs(np.diff(path)).sum()) if path.size > 1 else 0


def dcsi_path_cost(scores: np.ndarray, path: np.ndarray, cfg: DpConfig) -> float:
    """Total cost an extracted path pays on a horizon-ness score map."""
    a = np.asarray(scores, dtype=np.float64)
    node = float(np.sum(1.0 - a[path, np.arange(a.shape[1])]))
    return node + cfg.jump_weight * _jump_total(path)


def energy_path_cost(
    scores: np.ndarray, grad: GradientField, path: np.ndarray, cfg: DpConfig
) -> float:
    """Total cost an extracted path pays on a sky-ness score map."""
    data = energy_data_term(scores, cfg.likelihood_floor)
    cols = np.arange(data.shape[1])
    total = float(np.sum(data[path, cols]))
    total += cfg.jump_weight * _jump_total(path)
    total -= cfg.edge_weight * float(np.sum(grad.magnitude[path, cols]))
    return total


def extract_dcsi(scores: np.ndarray, cfg: DpConfig = DpConfig()) -> PathResult:
    """Minimum-cost skyline through a horizon-ness score map."""
    if cfg.variant != DCSI:
        raise ValueError("config variant must be dcsi")
    a = _check_scores(scores)
    path = _dp_min_path(1.0 - a, cfg.delta, cfg.jump_weight)
    return PathResult(skyline=path, total_cost=dcsi_path_cost(a, path, cfg))


def extract_energy(
    scores: np.ndarray, grad: GradientField, cfg: DpConfig = DpConfig(variant=ENERGY)
) -> PathResult:
    """Minimum-energy skyline through a sky-ness score map."""
    if cfg.variant != ENERGY:
        raise ValueError("config variant must be energy")
    a = _check_scores(scores)
    if grad.magnitude.shape != a.shape:
        raise ValueError("gradient field shape must match the score map")
    node = energy_data_term(a, cfg.likelihood_floor) - cfg.edge_weight * grad.magnitude
    path = _dp_min_path(node, cfg.delta, cfg.jump_weight)
    return PathResult(skyline=path, total_cost=energy_path_cost(a, grad, path, cfg))


_BRUTE_LIMIT = 8


def brute_force_extract(
    scores: np.ndarray,
    cfg: DpConfig = DpConfig(),
    grad: GradientField | None = None,
) -> PathResult:
    """Exhaustive search over every admissible path; small maps only.

    Enumerates all rows**cols row sequences in lexicographic order, discards
    those violating the jump window, and keeps the first minimum, so ties
    break exactly as in the DP extractors. The energy data term is recomputed
    here by direct summation rather than prefix sums.
    """
    a = _check_scores(scores)
    rows, cols = a.shape
    if rows > _BRUTE_LIMIT or cols > _BRUTE_LIMIT:
        raise ValueError(f"brute force supports at most {_BRUTE_LIMIT}x{_BRUTE_LIMIT} maps")
    if cfg.variant == DCSI:
        node = 1.0 - a
    else:
        if grad is None:
            raise ValueError("energy mode needs a gradient field")
        p = np.clip(a, cfg.likelihood_floor, 1.0 - cfg.likelihood_floor)
        node = np.empty_like(a)
        for r in range(rows):
            for c in range(cols):
                cost = 0.0
                for i in range(rows):
                    cost -= np.log(p[i, c]) if i < r else np.log(1.0 - p[i, c])
                node[r, c] = cost
        node -= cfg.edge_weight * grad.magnitude

    if cols == 1:
        best_path = np.asarray([int(np.argmin(node[:, 0]))], dtype=np.int64)
    else:
        tail = np.stack(
            np.meshgrid(*([np.arange(rows, dtype=np.int16)] * (cols - 1)), indexing="ij")
        ).reshape(cols - 1, -1)
        col_idx = np.arange(1, cols)
        tail_node = node[tail, col_idx[:, None]].sum(axis=0)
        tail_jumps = np.abs(np.diff(tail, axis=0)).sum(axis=0)
        inner_ok = (np.abs(np.diff(tail, axis=0)) <= cfg.delta).all(axis=0)
        best_cost = np.inf
        best_path = None
        # one chunk per starting row keeps the path matrix within memory
        for r0 in range(rows):
            ok = inner_ok & (np.abs(tail[0] - r0) <= cfg.delta)
            if not ok.any():
                continue
            total = (
                node[r0, 0]
                + tail_node[ok]
                + cfg.jump_weight * (tail_jumps[ok] + np.abs(tail[0, ok] - r0))
            )
            k = int(np.argmin(total))
            if total[k] < best_cost:
                best_cost = float(total[k])
                best_path = np.concatenate(([r0], tail[:, ok][:, k])).astype(np.int64)
        if best_path is None:
            raise ValueError("no admissible path under the jump window")

    if cfg.variant == DCSI:
        total_cost = dcsi_path_cost(a, best_path, cfg)
    else:
        total_cost = energy_path_cost(a, grad, best_path, cfg)
    return PathResult(skyline=best_path, total_cost=total_cost)

"""Layout-quality metrics: occupancy statistics and neighborhood preservation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyDataset, TooFewSamples
from .model import pixel_of

BIN_PIXELS = 4  # occupancy statistics use 4x4-pixel bins
_SUBSAMPLE_CAP = 4096
_SUBSAMPLE_SEED = 1789


@dataclass(frozen=True)
class MetricRecord:
    iteration: int
    binned_stddev: float
    overplotting: float
    trustworthiness: Optional[float]
    ordering: Optional[float]
    wall_ms: float

    def to_json_line(self) -> str:
        # fixed key order keeps exports diff-able; wall time stays in memory
        # only, so identical runs export identical bytes
        return json.dumps({
            "iteration": self.iteration,
            "binned_stddev": self.binned_stddev,
            "overplotting": self.overplotting,
            "trustworthiness": self.trustworthiness,
            "ordering": self.ordering,
        })

    @staticmethod
    def from_json_line(line: str) -> "MetricRecord":
        d = json.loads(line)
        d.setdefault("wall_ms", 0.0)
        return MetricRecord(**d)


def binned_stddev(positions: np.ndarray, k: int) -> float:
    """Population standard deviation of per-bin sample counts.

    Bins are 4x4 pixels on the 2**k grid (k >= 2 keeps the tiling exact);
    zero for a perfectly regular layout with equal counts everywhere.
    """
    if k < 2:
        raise ValueError("k must be >= 2 so 4x4-pixel bins tile the grid")
    bins_per_side = (1 << k) // BIN_PIXELS
    n_bins = bins_per_side * bins_per_side
    if len(positions) == 0:
        return 0.0
    i, j = pixel_of(positions[:, 0], positions[:, 1], k)
    idx = (j // BIN_PIXELS) * bins_per_side + (i // BIN_PIXELS)
    counts = np.bincount(idx, minlength=n_bins)
    return float(counts.std())


def overplotting(positions: np.ndarray, k: int) -> float:
    """(n - occupied pixels) / n; zero when every sample owns a pixel."""
    n = len(positions)
    if n == 0:
        raise EmptyDataset("overplotting needs at least one sample")
    i, j = pixel_of(positions[:, 0], positions[:, 1], k)
    occupied = len(np.unique(j * (1 << k) + i))
    return (n - occupied) / n


def _neighbor_ranks(positions: np.ndarray) -> np.ndarray:
    """ranks[i, j] = rank of j among i's neighbors (1 = nearest, self = 0).

    Ties break toward the lower index, deterministically.
    """
    n = len(positions)
    delta = positions[:, None, :] - positions[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", delta, delta)
    np.fill_diagonal(dist2, -np.inf)  # self sorts first, gets rank 0
    order = np.argsort(dist2, axis=1, kind="stable")
    ranks = np.empty((n, n), dtype=np.int64)
    rows = np.arange(n)[:, None]
    ranks[rows, order] = np.arange(n)[None, :]
    return ranks


def trustworthiness(original: np.ndarray, deformed: np.ndarray,
                    n_neighbors: int = 10) -> float:
    """Rank-based neighborhood preservation in [0, 1]; 1 means no sample
    gained a neighbor it did not already have.

    Samples among the n_neighbors nearest in the deformed layout but not in
    the original are penalized by how far down the original ranking they sit.
    """
    original = np.asarray(original, dtype=np.float64)
    deformed = np.asarray(deformed, dtype=np.float64)
    n = len(original)
    if len(deformed) != n:
        raise ValueError("arrays must have the same length")
    if n <= n_neighbors:
        raise TooFewSamples(f"need more than {n_neighbors} samples")
    ranks_orig = _neighbor_ranks(original)
    ranks_def = _neighbor_ranks(deformed)
    in_knn_def = (ranks_def >= 1) & (ranks_def <= n_neighbors)
    penalties = (ranks_orig - n_neighbors)[in_knn_def]
    total = float(penalties[penalties > 0].sum())
    if total == 0.0:
        return 1.0
    norm = n * n_neighbors * (2 * n - 3 * n_neighbors - 1) / 2.0
    return 1.0 - total / norm


def orthogonal_ordering(original: np.ndarray, deformed: np.ndarray,
                        sample_cap: int = _SUBSAMPLE_CAP) -> float:
    """Fraction of sample pairs keeping both their x-order and y-order signs.

    Ties count as preserved only when the pair is tied the same way in both
    layouts.  Exact for n <= sample_cap, otherwise computed on a fixed-seed
    subsample of that size.
    """
    original = np.asarray(original, dtype=np.float64)
    deformed = np.asarray(deformed, dtype=np.float64)
    n = len(original)
    if len(deformed) != n:
        raise ValueError("arrays must have the same length")
    if n < 2:
        return 1.0
    if n > sample_cap:
        rng = np.random.Generator(np.random.PCG64(_SUBSAMPLE_SEED))
        pick = rng.choice(n, size=sample_cap, replace=False)
        original, deformed = original[pick], deformed[pick]
        n = sample_cap

    def sign_pairs(values):
        return np.sign(values[:, None] - values[None, :]).astype(np.int8)

    same_x = sign_pairs(original[:, 0]) == sign_pairs(deformed[:, 0])
    same_y = sign_pairs(original[:, 1]) == sign_pairs(deformed[:, 1])
    iu = np.triu_indices(n, k=1)
    preserved = int(np.count_nonzero(same_x[iu] & same_y[iu]))
    return preserved / (n * (n - 1) / 2)


def record_for_frame(iteration: int, original: np.ndarray, positions: np.ndarray,
                     k: int, wall_ms: float, full: bool = False,
                     n_neighbors: int = 10) -> MetricRecord:
    """Metric record for one run frame; neighborhood metrics only in full mode
    (subsampled with a fixed seed above the pair-metric cap)."""
    trust = order = None
    if full and len(positions) > n_neighbors:
        orig, moved = original, positions
        if len(orig) > _SUBSAMPLE_CAP:
            rng = np.random.Generator(np.random.PCG64(_SUBSAMPLE_SEED))
            pick = rng.choice(len(orig), size=_SUBSAMPLE_CAP, replace=False)
            orig, moved = orig[pick], moved[pick]
        trust = trustworthiness(orig, moved, n_neighbors=n_neighbors)
        order = orthogonal_ordering(orig, moved)
    return MetricRecord(
        iteration=iteration,
        binned_stddev=binned_stddev(positions, k),
        overplotting=overplotting(positions, k) if len(positions) else 0.0,
        trustworthiness=trust,
        ordering=order,
        wall_ms=wall_ms,
    )

"""Synthetic evaluation datasets: Gaussian mixtures, the diagonal stripe, the
fixed four-cluster benchmark, and labeled selection shapes.

Everything is driven by PCG64 streams seeded from (seed, index) tuples, so a
suite regenerates identically across platforms and any subset of it can be
produced in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidSpec
from .model import ScatterDataset

KINDS = ("gaussian-mixture", "diagonal", "four-cluster", "labeled-regions")

# Benchmark suite sizes: 250k..3M in 250k steps, cycled over the suite;
# desk scale divides them by 100 for CI-sized runs.
SUITE_SIZES = tuple((i + 1) * 250_000 for i in range(12))
FOUR_CLUSTER_COUNTS = (400_000, 300_000, 200_000, 100_000)
FOUR_CLUSTER_CENTERS = ((0.3, 0.3), (0.7, 0.3), (0.3, 0.7), (0.7, 0.7))
DESK_SCALE_DIVISOR = 100


@dataclass(frozen=True)
class GenSpec:
    kind: str = "gaussian-mixture"
    seed: object = 0  # int or tuple of ints (PCG64 seed material)
    n: int = 10_000
    cluster_range: Tuple[int, int] = (1, 8)
    weight_range: Tuple[float, float] = (0.5, 2.0)  # relative cluster sizes
    sigma_range: Tuple[float, float] = (0.005, 0.02)
    margin: float = 0.12  # min distance of cluster centers from the boundary
    band: float = 0.04  # half-width scale of the diagonal stripe
    desk_scale: bool = False  # divide the built-in four-cluster counts by 100

    def validate(self) -> "GenSpec":
        if self.kind not in KINDS:
            raise InvalidSpec(f"kind must be one of {KINDS}")
        if self.n < 0:
            raise InvalidSpec("n must be >= 0")
        if self.cluster_range[0] < 1 or self.cluster_range[1] < self.cluster_range[0]:
            raise InvalidSpec("cluster_range must be 1 <= lo <= hi")
        if self.sigma_range[0] <= 0 or self.sigma_range[1] < self.sigma_range[0]:
            raise InvalidSpec("sigma_range must be 0 < lo <= hi")
        if not 0.0 <= self.margin < 0.5:
            raise InvalidSpec("margin must be in [0, 0.5)")
        return self


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _gaussian_cluster(rng, center, sigma, count) -> np.ndarray:
    """Normal draws around the center, resampled until inside the unit square."""
    points = rng.normal(loc=center, scale=sigma, size=(count, 2))
    for _ in range(64):
        outside = np.any((points < 0.0) | (points > 1.0), axis=1)
        if not outside.any():
            break
        points[outside] = rng.normal(loc=center, scale=sigma,
                                     size=(int(outside.sum()), 2))
    np.clip(points, 0.0, 1.0, out=points)
    return points


def _split_counts(rng, spec: GenSpec) -> np.ndarray:
    lo, hi = spec.cluster_range
    m = int(rng.integers(lo, hi + 1))
    weights = rng.uniform(spec.weight_range[0], spec.weight_range[1], size=m)
    counts = np.floor(weights / weights.sum() * spec.n).astype(np.int64)
    counts[: spec.n - int(counts.sum())] += 1  # hand out the remainder
    return counts


def generate(spec: GenSpec) -> ScatterDataset:
    """Build one dataset; identical spec (seed included) gives identical output."""
    spec.validate()
    rng = _rng(spec.seed)

    if spec.kind == "gaussian-mixture":
        counts = _split_counts(rng, spec)
        centers = rng.uniform(spec.margin, 1.0 - spec.margin, size=(len(counts), 2))
        sigmas = rng.uniform(spec.sigma_range[0], spec.sigma_range[1],
                             size=len(counts))
        chunks = [_gaussian_cluster(rng, centers[c], sigmas[c], counts[c])
                  for c in range(len(counts))]
        labels = np.repeat(np.arange(len(counts)), counts)
        return ScatterDataset(positions=np.concatenate(chunks), labels=labels)

    if spec.kind == "diagonal":
        x = rng.random(spec.n)
        y = x + rng.normal(0.0, spec.band, size=spec.n)
        redo = (y < 0.0) | (y > 1.0)
        for _ in range(64):
            if not redo.any():
                break
            y[redo] = x[redo] + rng.normal(0.0, spec.band, size=int(redo.sum()))
            redo = (y < 0.0) | (y > 1.0)
        np.clip(y, 0.0, 1.0, out=y)
        return ScatterDataset(positions=np.column_stack([x, y]))

    if spec.kind == "four-cluster":
        div = DESK_SCALE_DIVISOR if spec.desk_scale else 1
        counts = [c // div for c in FOUR_CLUSTER_COUNTS]
        sigma = 0.05
        chunks = [_gaussian_cluster(rng, np.asarray(center), sigma, count)
                  for center, count in zip(FOUR_CLUSTER_CENTERS, counts)]
        labels = np.repeat(np.arange(4), counts)
        return ScatterDataset(positions=np.concatenate(chunks), labels=labels)

    # labeled-regions: three clusters, each with a differently shaped
    # sub-region relabeled so selections can be tracked through deformation
    counts = np.full(3, spec.n // 3, dtype=np.int64)
    counts[: spec.n - int(counts.sum())] += 1
    centers = np.array([(0.25, 0.3), (0.72, 0.35), (0.5, 0.75)])
    sigma = 0.07
    chunks, labels = [], []
    for c in range(3):
        pts = _gaussian_cluster(rng, centers[c], sigma, counts[c])
        local = pts - centers[c]
        if c == 0:  # disc
            selected = np.hypot(local[:, 0], local[:, 1]) < sigma
        elif c == 1:  # square
            selected = np.abs(local).max(axis=1) < sigma
        else:  # ring
            radius = np.hypot(local[:, 0], local[:, 1])
            selected = (radius > 0.6 * sigma) & (radius < 1.4 * sigma)
        chunks.append(pts)
        labels.append(np.where(selected, 3 + c, c))
    return ScatterDataset(positions=np.concatenate(chunks),
                          labels=np.concatenate(labels))


def suite_specs(count: int = 500, seed: int = 0,
                desk_scale: bool = False) -> list[GenSpec]:
    """Specs of the random-mixture evaluation suite; sizes cycle through the
    suite size family (divided by 100 at desk scale)."""
    div = DESK_SCALE_DIVISOR if desk_scale else 1
    return [
        GenSpec(kind="gaussian-mixture", seed=(seed, index),
                n=SUITE_SIZES[index % len(SUITE_SIZES)] // div)
        for index in range(count)
    ]


def generate_suite(count: int = 500, seed: int = 0,
                   desk_scale: bool = False) -> list[ScatterDataset]:
    """Materialize the whole suite (prefer suite_specs + generate per worker
    for full-scale sizes, where holding 500 datasets is not feasible)."""
    return [generate(spec) for spec in suite_specs(count, seed, desk_scale)]


def four_cluster(desk_scale: bool = False, seed: int = 4) -> ScatterDataset:
    return generate(GenSpec(kind="four-cluster", seed=seed, desk_scale=desk_scale))


def diagonal(n: int = 10_000, seed: int = 7, band: float = 0.04) -> ScatterDataset:
    return generate(GenSpec(kind="diagonal", seed=seed, n=n, band=band))

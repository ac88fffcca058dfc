"""Shared domain types and coordinate conventions.

Every grid in the package is a square ``2**k x 2**k`` float array stored
row-major with the origin at the top-left: ``values[j, i]`` where ``i`` runs
horizontally (x) and ``j`` vertically (y).  Pixel ``(i, j)`` is identified
with the texture coordinate ``(x, y) = 2**-k * (i, j)``; all interpolation
uses this corner-aligned convention.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CoordinateOutOfRange,
    InvalidParams,
    LabelLengthMismatch,
    NonFiniteCoordinate,
    OutOfRangeLevel,
)


@dataclass(frozen=True)
class ScatterDataset:
    """Ordered 2D samples in the unit square with stable row ids."""

    positions: np.ndarray  # (n, 2) float64, columns x then y
    labels: Optional[np.ndarray] = None  # (n,) int, or None when unlabeled
    ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.ids is None:
            object.__setattr__(self, "ids", np.arange(len(self.positions)))

    @property
    def n(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class DensityTexture:
    """Smoothed per-pixel sample density plus a constant background."""

    values: np.ndarray  # (2**k, 2**k) float64, indexed [j, i]
    k: int
    kernel_size: int
    background: float
    n: int

    @property
    def size(self) -> int:
        return 1 << self.k


@dataclass(frozen=True)
class IntegralSet:
    """The eight per-pixel integral tables of one density texture.

    ``rect_*`` tables sum the texture over the axis-aligned corner rectangle
    on the named side of each pixel (``tl`` = columns <= i, rows <= j, and so
    on); ``wedge_*`` tables sum over the 45-degree wedge opening toward the
    named direction.  Each family partitions the domain, so both table
    quadruples sum to ``total`` at every pixel.
    """

    rect_tl: np.ndarray
    rect_bl: np.ndarray
    rect_br: np.ndarray
    rect_tr: np.ndarray
    wedge_up: np.ndarray
    wedge_left: np.ndarray
    wedge_down: np.ndarray
    wedge_right: np.ndarray
    total: float
    k: int

    def tables(self):
        return (
            self.rect_tl, self.rect_bl, self.rect_br, self.rect_tr,
            self.wedge_up, self.wedge_left, self.wedge_down, self.wedge_right,
        )


@dataclass(frozen=True)
class DeformationField:
    """Per-pixel target coordinates of one deformation step."""

    targets: np.ndarray  # (2**k, 2**k, 2), [..., 0] = x, [..., 1] = y
    k: int
    max_excursion: float = 0.0  # largest pre-clamp overshoot beyond [0,1]

    @property
    def size(self) -> int:
        return 1 << self.k


_STOP_KINDS = ("fixed", "displacement", "time")


@dataclass(frozen=True)
class RegularizationParams:
    k: int = 10
    kernel_size: int = 8
    iterations: int = 16
    stop: str = "fixed"
    epsilon: float = 1e-4  # texture-coordinate displacement threshold
    time_budget: Optional[float] = None  # seconds, for stop="time"
    background: Optional[float] = None  # None = auto (n / pixel count)
    frame_cap: int = 64

    def validate(self) -> "RegularizationParams":
        if self.k < 1:
            raise InvalidParams("k must be >= 1")
        if self.kernel_size < 1:
            raise InvalidParams("kernel_size must be >= 1")
        if self.iterations < 0:
            raise InvalidParams("iterations must be >= 0")
        if self.stop not in _STOP_KINDS:
            raise InvalidParams(f"stop must be one of {_STOP_KINDS}")
        if self.stop == "displacement" and not self.epsilon > 0:
            raise InvalidParams("epsilon must be > 0")
        if self.stop == "time" and (self.time_budget is None or self.time_budget <= 0):
            raise InvalidParams("time_budget must be > 0 for stop='time'")
        if self.background is not None and not self.background > 0:
            raise InvalidParams("explicit background must be > 0")
        if self.frame_cap < 2:
            raise InvalidParams("frame_cap must be >= 2")
        return self


class RegularizationRun:
    """Original dataset plus the per-iteration frames, fields, and metrics.

    Frames beyond ``params.frame_cap`` are not all retained; missing ones are
    recomputed on demand from the nearest stored predecessor (iterations are
    deterministic).
    """

    def __init__(self, dataset: ScatterDataset, params: RegularizationParams,
                 store_fields: bool = True):
        self.original = dataset
        self.params = params
        self.store_fields = store_fields
        self.fields: list[DeformationField] = []
        self.metrics: list = []
        self._frames: dict[int, np.ndarray] = {0: dataset.positions}
        self._stride = 1
        self.iterations = 0  # frames recorded so far beyond frame 0
        self.wall_times: list[float] = []  # seconds per iteration

    def _record(self, t: int, positions: np.ndarray):
        self._frames[t] = positions
        self.iterations = max(self.iterations, t)
        if len(self._frames) > self.params.frame_cap:
            self._stride *= 2
            keep = {0, self.iterations}
            keep.update(i for i in self._frames if i % self._stride == 0)
            self._frames = {i: p for i, p in self._frames.items() if i in keep}

    def frame(self, t: int) -> np.ndarray:
        """Positions after t iterations (t = 0 is the input layout)."""
        if not 0 <= t <= self.iterations:
            raise OutOfRangeLevel(f"frame {t} outside [0, {self.iterations}]")
        if t in self._frames:
            return self._frames[t]
        from .regularize import iterate_once  # cycle-free at call time

        base = max(i for i in self._frames if i <= t)
        positions = self._frames[base]
        for _ in range(base, t):
            positions, _field, _density = iterate_once(positions, self.params)
        return positions

    @property
    def frames(self) -> list[np.ndarray]:
        return [self.frame(t) for t in range(self.iterations + 1)]


def unit_coordinates(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel texture coordinates (X, Y), each shaped (2**k, 2**k)."""
    axis = np.arange(1 << k, dtype=np.float64) * (2.0 ** -k)
    return np.meshgrid(axis, axis, indexing="xy")


def pixel_of(x, y, k: int):
    """Pixel indices (i, j) containing the coordinates.

    Coordinates exactly on the right/bottom edge clamp into the last pixel so
    every point of [0, 1]^2 is addressable.
    """
    size = 1 << k
    i = np.minimum(np.floor(np.asarray(x) * size), size - 1).astype(np.int64)
    j = np.minimum(np.floor(np.asarray(y) * size), size - 1).astype(np.int64)
    return i, j


def validate_dataset(raw, labels: Optional[Sequence] = None,
                     normalize: bool = True) -> ScatterDataset:
    """Validate raw coordinate pairs and wrap them as a ScatterDataset.

    With ``normalize=True`` each axis is min-max scaled onto [0, 1]; a
    degenerate axis (max == min) maps to 0.5.  With ``normalize=False``
    out-of-range input raises instead.  Ids are assigned 0..n-1 in row order.
    """
    positions = np.asarray(raw, dtype=np.float64)
    if positions.size == 0:
        positions = positions.reshape(0, 2)
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise ValueError("expected an (n, 2) array of coordinate pairs")
    if not np.isfinite(positions).all():
        bad = np.argwhere(~np.isfinite(positions))[0]
        raise NonFiniteCoordinate(f"non-finite coordinate at row {bad[0]}")

    if normalize and len(positions):
        lo = positions.min(axis=0)
        hi = positions.max(axis=0)
        span = hi - lo
        out = np.empty_like(positions)
        for axis in range(2):
            if span[axis] == 0.0:
                out[:, axis] = 0.5
            else:
                out[:, axis] = (positions[:, axis] - lo[axis]) / span[axis]
        positions = out
    elif len(positions):
        if positions.min() < 0.0 or positions.max() > 1.0:
            raise CoordinateOutOfRange("coordinates outside [0,1]^2; "
                                       "pass normalize=True to rescale")

    label_array = None
    if labels is not None:
        if len(labels) != len(positions):
            raise LabelLengthMismatch(
                f"{len(labels)} labels for {len(positions)} samples")
        label_array = np.asarray(labels)
        if label_array.dtype.kind not in "iu":
            _uniq, label_array = np.unique(label_array, return_inverse=True)
        label_array = label_array.astype(np.int64)

    return ScatterDataset(positions=positions, labels=label_array)


def elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1e3

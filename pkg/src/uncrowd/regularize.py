"""Iterative density equalization: density -> tables -> field -> resample.

One iteration rebuilds the density from the current sample positions, derives
the eight integral tables, evaluates the defect-corrected field at every
pixel, and moves each sample to the field bilinearly interpolated at its old
position.  The flat-texture response is data-independent, so it is built once
per run and reused by every iteration.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from .density import build_density
from .errors import OutOfRangeLevel
from .integral import build_integral_set
from .mapping import build_field, flat_response, sample_field
from .metrics import record_for_frame
from .model import RegularizationParams, RegularizationRun, ScatterDataset


def iterate_once(positions: np.ndarray, params: RegularizationParams,
                 defect: Optional[np.ndarray] = None):
    """One equalization step; returns (new positions, field, density).

    Sample order is untouched, so row i keeps naming the same sample.
    """
    density = build_density(positions, params)
    tables = build_integral_set(density)
    if defect is None:
        defect = flat_response.get(params.k)
    field = build_field(tables, defect)
    new_positions = np.clip(sample_field(field, positions), 0.0, 1.0)
    return new_positions, field, density


def run(dataset: ScatterDataset, params: RegularizationParams,
        collect_metrics: str = "none", store_fields: bool = True,
        n_neighbors: int = 10) -> RegularizationRun:
    """Repeat iterations until the stopping criterion fires.

    ``collect_metrics``: "none", "basic" (occupancy statistics per frame), or
    "full" (adds neighborhood metrics against frame 0, subsampled above 4096
    samples).  ``params.iterations`` caps every criterion.
    """
    params.validate()
    result = RegularizationRun(dataset, params, store_fields=store_fields)
    defect = flat_response.get(params.k)

    if collect_metrics != "none":
        result.metrics.append(record_for_frame(
            0, dataset.positions, dataset.positions, params.k,
            wall_ms=0.0, full=collect_metrics == "full",
            n_neighbors=n_neighbors))

    positions = dataset.positions
    started = time.perf_counter()
    for t in range(1, params.iterations + 1):
        if params.stop == "time" and time.perf_counter() - started > params.time_budget:
            break
        tick = time.perf_counter()
        new_positions, field, _density = iterate_once(positions, params, defect)
        wall = time.perf_counter() - tick
        result.wall_times.append(wall)
        if store_fields:
            result.fields.append(field)
        result._record(t, new_positions)
        if collect_metrics != "none":
            result.metrics.append(record_for_frame(
                t, dataset.positions, new_positions, params.k,
                wall_ms=wall * 1e3, full=collect_metrics == "full",
                n_neighbors=n_neighbors))
        displacement = float(np.abs(new_positions - positions).max()) if len(positions) else 0.0
        positions = new_positions
        if params.stop == "displacement" and displacement < params.epsilon:
            break
    return result


def transition_positions(run_result: RegularizationRun, level: float) -> np.ndarray:
    """Per-sample linear blend between the two frames bracketing ``level``."""
    top = run_result.iterations
    if not 0.0 <= level <= top:
        raise OutOfRangeLevel(f"level {level} outside [0, {top}]")
    low = int(np.floor(level))
    high = int(np.ceil(level))
    if low == high:
        return run_result.frame(low)
    frac = level - low
    return (1.0 - frac) * run_result.frame(low) + frac * run_result.frame(high)


def map_through(fields, points: np.ndarray, upto: Optional[int] = None) -> np.ndarray:
    """Push points through the composed per-iteration fields, in run order.

    Any point mapped this way lands exactly where a sample at the same start
    position would: both use the same bilinear field evaluation per step.
    """
    if isinstance(fields, RegularizationRun):
        fields = fields.fields
    if upto is None:
        upto = len(fields)
    out = np.asarray(points, dtype=np.float64)
    for field in fields[:upto]:
        out = np.clip(sample_field(field, out), 0.0, 1.0)
    return out

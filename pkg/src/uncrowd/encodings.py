"""Visual encodings of the applied deformation: a deformed sparse grid, the
original density carried into the deformed domain, and deformed contour lines.

All encodings push their vertices through the same composed per-iteration
fields the samples go through, so a grid node or contour vertex coincident
with a sample lands exactly on that sample's deformed position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import distance_transform_edt
from skimage.measure import find_contours

from .errors import LevelOutOfRange
from .model import DensityTexture, RegularizationRun, unit_coordinates
from .regularize import map_through

DEFAULT_SPACING = 32  # pixels between grid lines at k = 10
DEFAULT_SUBDIVISION = 8  # sampled points per grid cell edge
DEFAULT_LEVEL_FRACTIONS = (1.0 / 16.0, 1.0 / 4.0, 1.0 / 2.0)


@dataclass(frozen=True)
class GridOverlay:
    polylines: list  # list of (m, 2) float arrays in [0,1]^2
    spacing: int
    subdivision: int


@dataclass(frozen=True)
class ContourSet:
    polylines: list  # list of (m, 2) float arrays
    line_levels: list  # density level of each polyline
    levels: list  # the requested level set


@dataclass(frozen=True)
class BackgroundTexture:
    values: np.ndarray  # (2**k, 2**k) resampled original density
    k: int
    value_range: tuple  # (min, max) of the source density
    transfer: str = "luminance"  # named preset, not part of correctness


def _fields_of(run_or_field):
    if isinstance(run_or_field, RegularizationRun):
        return run_or_field.fields
    return [run_or_field]


def deform_grid(run_or_field, spacing: int = DEFAULT_SPACING,
                subdivision: int = DEFAULT_SUBDIVISION,
                upto: Optional[int] = None) -> GridOverlay:
    """Regular grid polylines mapped through the deformation.

    Line positions are spaced ``spacing`` pixels apart (domain edges
    included); each cell edge is sampled at ``subdivision`` points so
    curvature between nodes renders smoothly.
    """
    if spacing < 2:
        raise ValueError("spacing must be >= 2 pixels")
    if subdivision < 1:
        raise ValueError("subdivision must be >= 1")
    fields = _fields_of(run_or_field)
    k = fields[0].k if fields else 10
    size = 1 << k
    pixel_marks = np.arange(0, size + 1, spacing)  # domain edges included
    line_positions = pixel_marks / size
    cells = len(pixel_marks) - 1
    ticks = np.linspace(0.0, line_positions[-1], cells * subdivision + 1)

    polylines = []
    for pos in line_positions:
        horizontal = np.column_stack([ticks, np.full_like(ticks, pos)])
        vertical = np.column_stack([np.full_like(ticks, pos), ticks])
        polylines.append(map_through(fields, horizontal, upto))
        polylines.append(map_through(fields, vertical, upto))
    return GridOverlay(polylines=polylines, spacing=spacing,
                       subdivision=subdivision)


def default_levels(density: DensityTexture) -> list:
    """Levels at fixed fractions of the density excess over the background."""
    peak = float(density.values.max())
    base = density.background
    return [base + f * (peak - base) for f in DEFAULT_LEVEL_FRACTIONS]


def extract_contours(density: DensityTexture, levels: Sequence[float]) -> ContourSet:
    """Marching-squares isolines of the undeformed density.

    Linear interpolation along pixel edges; ambiguous saddle cells resolve to
    keep the high-density regions separated.  Vertex order is deterministic.
    """
    lo = float(density.values.min())
    hi = float(density.values.max())
    for level in levels:
        if not lo < level < hi:
            raise LevelOutOfRange(
                f"level {level} outside the open density range ({lo}, {hi})")
    scale = 2.0 ** -density.k
    polylines, line_levels = [], []
    for level in levels:
        for rc in find_contours(density.values, level):
            polylines.append(rc[:, ::-1] * scale)  # (row, col) -> (x, y)
            line_levels.append(level)
    return ContourSet(polylines=polylines, line_levels=line_levels,
                      levels=list(levels))


def deform_contours(contours: ContourSet, run_or_field,
                    upto: Optional[int] = None) -> ContourSet:
    """Map every contour vertex through the composed fields; levels stay."""
    fields = _fields_of(run_or_field)
    mapped = [map_through(fields, line, upto) for line in contours.polylines]
    return ContourSet(polylines=mapped, line_levels=list(contours.line_levels),
                      levels=list(contours.levels))


def deform_background(run: RegularizationRun, upto: Optional[int] = None) -> BackgroundTexture:
    """Original (iteration-0) density carried to the deformed domain.

    Every source pixel's coordinate is pushed through the composed forward
    map; its value is splatted with bilinear weights and the accumulated
    values are weight-normalized, so the output never leaves the source value
    range.  Uncovered pixels copy their nearest covered neighbor.
    """
    from .density import build_density

    density = build_density(run.frame(0), run.params)
    size = density.size
    X, Y = unit_coordinates(density.k)
    sources = np.column_stack([X.ravel(), Y.ravel()])
    targets = map_through(run.fields, sources, upto)

    scaled = targets * size
    cell = np.clip(np.floor(scaled), 0, size - 2).astype(np.int64)
    frac = np.clip(scaled - cell, 0.0, 1.0)
    i0, j0 = cell[:, 0], cell[:, 1]
    fx, fy = frac[:, 0], frac[:, 1]

    acc = np.zeros((size, size), dtype=np.float64)
    weight = np.zeros((size, size), dtype=np.float64)
    values = density.values.ravel()
    for di, dj, w in ((0, 0, (1 - fx) * (1 - fy)), (1, 0, fx * (1 - fy)),
                      (0, 1, (1 - fx) * fy), (1, 1, fx * fy)):
        np.add.at(acc, (j0 + dj, i0 + di), w * values)
        np.add.at(weight, (j0 + dj, i0 + di), w)

    covered = weight > 0.0
    out = np.zeros_like(acc)
    out[covered] = acc[covered] / weight[covered]
    if not covered.all():
        _dist, (jn, in_) = distance_transform_edt(~covered, return_indices=True)
        out[~covered] = out[jn[~covered], in_[~covered]]
    return BackgroundTexture(values=out, k=density.k,
                             value_range=(float(density.values.min()),
                                          float(density.values.max())))


def points_in_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd rule point-in-polygon test, vectorized over points."""
    points = np.asarray(points, dtype=np.float64)
    poly = np.asarray(polygon, dtype=np.float64)
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    m = len(poly)
    for a in range(m):
        b = (a - 1) % m
        xa, ya = poly[a]
        xb, yb = poly[b]
        crosses = (ya > y) != (yb > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = (xb - xa) * (y - ya) / (yb - ya) + xa
        inside ^= crosses & (x < x_at)
    return inside


def polygon_area(polygon: np.ndarray) -> float:
    """Shoelace area; zero for degenerate (collinear or < 3 vertex) input."""
    poly = np.asarray(polygon, dtype=np.float64)
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

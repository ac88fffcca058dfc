"""Deterministic rasterization of frames and encodings to PNG images.

The renderer is intentionally minimal: identical inputs must produce
byte-identical files, which rules out any styling that depends on ambient
state.  Encodings draw beneath the sample points.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from PIL import Image

# Categorical palette (cycled by label); starts blue/red/green/orange to
# match the four-cluster benchmark coloring.
PALETTE = np.array([
    (31, 119, 180), (214, 39, 40), (44, 160, 44), (255, 127, 14),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (127, 127, 127),
    (188, 189, 34), (23, 190, 207),
], dtype=np.uint8)
UNLABELED = np.array((40, 40, 90), dtype=np.uint8)
GRID_COLOR = np.array((170, 170, 170), dtype=np.uint8)
CONTOUR_COLOR = np.array((60, 60, 60), dtype=np.uint8)


def _to_px(points: np.ndarray, size: int) -> np.ndarray:
    return np.clip((np.asarray(points) * size).astype(np.int64), 0, size - 1)


def _draw_polyline(img: np.ndarray, line: np.ndarray, color: np.ndarray):
    size = img.shape[0]
    pts = np.asarray(line, dtype=np.float64)
    if len(pts) < 2:
        return
    seg = np.diff(pts, axis=0)
    # sample each segment at sub-pixel steps: dense enough to leave no gaps
    steps = np.maximum(1, np.ceil(np.abs(seg * size).max(axis=1)).astype(np.int64) * 2)
    for a in range(len(seg)):
        t = np.linspace(0.0, 1.0, steps[a] + 1)[:, None]
        chain = pts[a] + t * seg[a]
        px = _to_px(chain, size)
        img[px[:, 1], px[:, 0]] = color


def luminance_ramp(values: np.ndarray, value_range) -> np.ndarray:
    """Monotone single-hue ramp: low density white, high density deep blue."""
    lo, hi = value_range
    span = hi - lo if hi > lo else 1.0
    t = np.clip((values - lo) / span, 0.0, 1.0)
    ramp = np.empty(values.shape + (3,), dtype=np.uint8)
    ramp[..., 0] = np.round(255 - 205 * t).astype(np.uint8)
    ramp[..., 1] = np.round(255 - 175 * t).astype(np.uint8)
    ramp[..., 2] = np.round(255 - 75 * t).astype(np.uint8)
    return ramp


def render_frame(positions: np.ndarray, labels: Optional[np.ndarray] = None,
                 size: int = 512, point_radius: int = 0,
                 background: Optional[np.ndarray] = None,
                 background_range=None,
                 grid_lines=None, contour_lines=None,
                 path=None) -> np.ndarray:
    """Rasterize one frame; returns the image array and optionally saves PNG.

    Points are (2 * point_radius + 1)-pixel squares colored by label through
    the categorical palette; grid and contour polylines and the density
    background render beneath them.
    """
    img = np.full((size, size, 3), 255, dtype=np.uint8)
    if background is not None:
        shade = luminance_ramp(np.asarray(background),
                               background_range or
                               (float(np.min(background)), float(np.max(background))))
        if shade.shape[0] != size:
            idx = (np.arange(size) * shade.shape[0]) // size
            shade = shade[np.ix_(idx, idx)]
        img[:] = shade
    for line in grid_lines or []:
        _draw_polyline(img, line, GRID_COLOR)
    for line in contour_lines or []:
        _draw_polyline(img, line, CONTOUR_COLOR)

    if len(positions):
        px = _to_px(positions, size)
        if labels is None:
            colors = np.broadcast_to(UNLABELED, (len(px), 3))
        else:
            colors = PALETTE[np.asarray(labels) % len(PALETTE)]
        for dj in range(-point_radius, point_radius + 1):
            for di in range(-point_radius, point_radius + 1):
                jj = np.clip(px[:, 1] + dj, 0, size - 1)
                ii = np.clip(px[:, 0] + di, 0, size - 1)
                img[jj, ii] = colors
    if path is not None:
        Image.fromarray(img).save(path, format="PNG")
    return img

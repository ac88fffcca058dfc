"""Rasterized sample density: accumulation, smoothing, background constant."""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.ndimage import convolve1d

from .errors import ZeroBackground
from .model import DensityTexture, RegularizationParams, ScatterDataset, pixel_of


def accumulate(positions: np.ndarray, k: int) -> np.ndarray:
    """Per-pixel sample counts; each sample lands on exactly one pixel.

    Counting is integer-exact, so any parallel split over samples reduces to
    the same grid as this sequential bincount.
    """
    size = 1 << k
    grid = np.zeros((size, size), dtype=np.float64)
    if len(positions) == 0:
        return grid
    i, j = pixel_of(positions[:, 0], positions[:, 1], k)
    flat = np.bincount(j * size + i, minlength=size * size)
    grid += flat.reshape(size, size)
    return grid


def smoothing_kernel(kernel_size: int) -> np.ndarray:
    """Discrete 1D Gaussian with sigma = kernel_size / 2, truncated at
    3 * kernel_size taps per side, normalized to unit sum."""
    radius = 3 * kernel_size
    sigma = kernel_size / 2.0
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-0.5 * (t / sigma) ** 2)
    return w / w.sum()


def gaussian_smooth(grid: np.ndarray, kernel_size: int) -> np.ndarray:
    """Separable Gaussian smoothing: a horizontal pass then a vertical pass.

    Boundaries fold the truncated kernel back into the domain (reflected
    taps), which keeps constants exact and leaks no mass out of the domain.
    """
    if kernel_size < 1:
        raise ValueError("kernel_size must be >= 1")
    w = smoothing_kernel(kernel_size)
    out = convolve1d(grid, w, axis=1, mode="reflect")
    out = convolve1d(out, w, axis=0, mode="reflect")
    return out


def build_density(dataset_or_positions, params: RegularizationParams,
                  n: Optional[int] = None) -> DensityTexture:
    """Smoothed counts plus the background constant at every pixel.

    The background defaults to the average sample count per pixel,
    n / 2**(2k); an explicit non-positive value raises ZeroBackground.
    """
    positions = (dataset_or_positions.positions
                 if isinstance(dataset_or_positions, ScatterDataset)
                 else np.asarray(dataset_or_positions))
    if n is None:
        n = len(positions)
    if params.background is not None:
        if params.background <= 0:
            raise ZeroBackground("background density must be > 0")
        background = float(params.background)
    else:
        background = n / float(1 << (2 * params.k))
        if background == 0.0:  # empty dataset: keep the texture positive
            background = 1.0
    values = gaussian_smooth(accumulate(positions, params.k), params.kernel_size)
    values += background
    return DensityTexture(values=values, k=params.k,
                          kernel_size=params.kernel_size,
                          background=background, n=n)

"""Eight integral tables of a density texture via staged doubling scans.

Stage 1 turns the texture into upper/lower column integrals, stage 2
accumulates those horizontally into the four corner-rectangle tables, stage 3
sums column integrals along the diagonals into four auxiliary triangle tables,
and stage 4 combines triangles, column integrals, and column-sum prefixes into
the four wedge tables by plain arithmetic.

Each scan runs exactly k doubling steps on a 2**k-side texture; within a step
all positions update from the previous step's values, so steps parallelize
freely and a barrier between steps reproduces the sequential result.  All
accumulation is float64: 32-bit prefix sums over ~10**6 pixels lose too many
digits for the 1e-9 partition-identity contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import DensityTexture, IntegralSet


class _StepCounter:
    """Counts doubling steps; tests assert the k-steps-per-stage contract."""

    def __init__(self):
        self.steps = 0

    def reset(self):
        self.steps = 0


scan_counter = _StepCounter()


def _count_steps(n: int):
    scan_counter.steps += max(0, int(n).bit_length() - 1)


@njit(cache=True)
def _scan_rows_down(a):
    # a[j] += a[j - step]; descending j keeps the source at pre-step values
    n = a.shape[0]
    step = 1
    while step < n:
        for j in range(n - 1, step - 1, -1):
            for i in range(a.shape[1]):
                a[j, i] += a[j - step, i]
        step *= 2


@njit(cache=True)
def _scan_rows_up(a):
    n = a.shape[0]
    step = 1
    while step < n:
        for j in range(n - step):
            for i in range(a.shape[1]):
                a[j, i] += a[j + step, i]
        step *= 2


@njit(cache=True)
def _scan_cols_right(a):
    n = a.shape[1]
    step = 1
    while step < n:
        for j in range(a.shape[0]):
            for i in range(n - 1, step - 1, -1):
                a[j, i] += a[j, i - step]
        step *= 2


@njit(cache=True)
def _scan_cols_left(a):
    n = a.shape[1]
    step = 1
    while step < n:
        for j in range(a.shape[0]):
            for i in range(n - step):
                a[j, i] += a[j, i + step]
        step *= 2


@njit(cache=True)
def _scan_diagonal(a, toward_top, toward_left):
    n = a.shape[0]
    step = 1
    while step < n:
        if toward_top:
            # source rows are above and untouched when sweeping bottom-up
            for j in range(n - 1, step - 1, -1):
                if toward_left:
                    for i in range(n - 1, step - 1, -1):
                        a[j, i] += a[j - step, i - step]
                else:
                    for i in range(n - step):
                        a[j, i] += a[j - step, i + step]
        else:
            for j in range(n - step):
                if toward_left:
                    for i in range(n - 1, step - 1, -1):
                        a[j, i] += a[j + step, i - step]
                else:
                    for i in range(n - step):
                        a[j, i] += a[j + step, i + step]
        step *= 2


@njit(cache=True)
def _scan_1d(a):
    n = a.shape[0]
    step = 1
    while step < n:
        for i in range(n - 1, step - 1, -1):
            a[i] += a[i - step]
        step *= 2


@dataclass(frozen=True)
class ColumnIntegrals:
    """Per-pixel column sums: rows <= j (upper) and rows > j (lower)."""

    upper: np.ndarray
    lower: np.ndarray


@dataclass(frozen=True)
class TriangleIntegrals:
    """Column integrals accumulated along the four diagonal directions.

    ``up_left[j, i]`` sums ``upper`` over the chain (j, i), (j-1, i-1), ...;
    the other three follow the same pattern toward their corners (lower-side
    tables chain over ``lower``).
    """

    up_left: np.ndarray
    up_right: np.ndarray
    down_left: np.ndarray
    down_right: np.ndarray


def _prefix_scan(values: np.ndarray, axis: int) -> np.ndarray:
    """Inclusive prefix sum by doubling: step t adds the block 2**t before."""
    out = np.ascontiguousarray(values, dtype=np.float64).copy()
    if out.ndim == 1:
        _scan_1d(out)
    elif axis == 0:
        _scan_rows_down(out)
    else:
        _scan_cols_right(out)
    _count_steps(out.shape[axis if out.ndim > 1 else 0])
    return out


def _suffix_scan_exclusive(values: np.ndarray, axis: int) -> np.ndarray:
    """Strict suffix sum (entries after the pixel) by doubling."""
    out = np.zeros_like(values, dtype=np.float64)
    if axis == 0:
        out[:-1] = values[1:]
        _scan_rows_up(out)
    else:
        out[:, :-1] = values[:, 1:]
        _scan_cols_left(out)
    _count_steps(out.shape[axis])
    return out


def _diagonal_scan(values: np.ndarray, toward_top: bool, toward_left: bool) -> np.ndarray:
    """Inclusive sum along one diagonal chain by doubling steps."""
    out = np.ascontiguousarray(values, dtype=np.float64).copy()
    _scan_diagonal(out, toward_top, toward_left)
    _count_steps(out.shape[0])
    return out


def column_integrals(d: np.ndarray) -> ColumnIntegrals:
    """Exact per-column prefix (upper) and strict suffix (lower) sums."""
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] & (d.shape[0] - 1):
        raise ValueError("texture must be square with a power-of-two side")
    return ColumnIntegrals(upper=_prefix_scan(d, axis=0),
                           lower=_suffix_scan_exclusive(d, axis=0))


def classical_rects(cols: ColumnIntegrals):
    """Corner-rectangle tables (tl, bl, br, tr) from the column integrals.

    tl and bl collect upper/lower column integrals over columns <= i; tr and
    br collect them over columns > i.  Together the four regions tile the
    texture, so they sum to the total mass at every pixel.
    """
    rect_tl = _prefix_scan(cols.upper, axis=1)
    rect_bl = _prefix_scan(cols.lower, axis=1)
    rect_tr = _suffix_scan_exclusive(cols.upper, axis=1)
    rect_br = _suffix_scan_exclusive(cols.lower, axis=1)
    return rect_tl, rect_bl, rect_br, rect_tr


def triangle_integrals(cols: ColumnIntegrals) -> TriangleIntegrals:
    return TriangleIntegrals(
        up_left=_diagonal_scan(cols.upper, toward_top=True, toward_left=True),
        up_right=_diagonal_scan(cols.upper, toward_top=True, toward_left=False),
        down_left=_diagonal_scan(cols.lower, toward_top=False, toward_left=True),
        down_right=_diagonal_scan(cols.lower, toward_top=False, toward_left=False),
    )


def tilted_wedges(tri: TriangleIntegrals, cols: ColumnIntegrals):
    """Wedge tables (up, left, down, right) by triangle arithmetic.

    The up wedge is the union of the two upper triangles, whose shared pixel
    column is counted twice, hence the subtraction; the down wedge mirrors it.
    The left/right wedges are the left/right half-planes minus the triangles
    already accounted for, using column-sum prefixes for the half-plane mass.
    """
    colsum = cols.upper[-1, :]  # full per-column sums
    left_half = _prefix_scan(colsum, axis=0)  # columns <= i
    right_half = _prefix_scan(colsum[::-1], axis=0)[::-1]  # columns >= i

    wedge_up = tri.up_left + tri.up_right - cols.upper
    wedge_down = tri.down_left + tri.down_right - cols.lower
    wedge_left = left_half[None, :] - tri.up_left - tri.down_left
    wedge_right = right_half[None, :] - tri.up_right - tri.down_right
    return wedge_up, wedge_left, wedge_down, wedge_right


def build_integral_set(d) -> IntegralSet:
    """All eight tables plus the independently accumulated total mass."""
    if isinstance(d, DensityTexture):
        values, k = d.values, d.k
    else:
        values = np.asarray(d, dtype=np.float64)
        k = int(values.shape[0]).bit_length() - 1
    cols = column_integrals(values)
    rect_tl, rect_bl, rect_br, rect_tr = classical_rects(cols)
    tri = triangle_integrals(cols)
    wedge_up, wedge_left, wedge_down, wedge_right = tilted_wedges(tri, cols)
    return IntegralSet(
        rect_tl=rect_tl, rect_bl=rect_bl, rect_br=rect_br, rect_tr=rect_tr,
        wedge_up=wedge_up, wedge_left=wedge_left,
        wedge_down=wedge_down, wedge_right=wedge_right,
        total=float(values.sum()), k=k,
    )

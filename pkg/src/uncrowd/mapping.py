"""The global deformation map and its bilinear evaluation at sample positions.

Every pixel is pulled toward eight boundary points, each weighted by the
integral of the density over the region on the opposite side of the pixel, so
dense regions push their surroundings away.  Dividing the weighted sum by
twice the total mass makes it a convex combination of boundary points, hence
the raw map never leaves the unit square.  Subtracting the response of a flat
texture turns constant density into a fixed point, which is what lets the
iteration converge instead of drifting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import SingularMass
from .integral import build_integral_set
from .model import DeformationField, IntegralSet, pixel_of, unit_coordinates


@dataclass(frozen=True)
class AnchorSet:
    """Boundary points where the four diagonal rays through (x, y) exit the
    unit square.  Piecewise-linear in (x, y) and continuous across the two
    diagonal seams (y = x and x + y = 1)."""

    down_right: np.ndarray  # ray (+1, +1)
    up_right: np.ndarray    # ray (+1, -1)
    up_left: np.ndarray     # ray (-1, -1)
    down_left: np.ndarray   # ray (-1, +1)


def _stack(x, y):
    return np.stack(np.broadcast_arrays(x, y), axis=-1).astype(np.float64)


def _anchor_components(x, y):
    """Componentwise diagonal exit points (q1..q4 as x/y array pairs)."""
    below_diag = y < x
    dr_x = np.where(below_diag, 1.0, 1.0 - y + x)
    dr_y = np.where(below_diag, 1.0 + y - x, 1.0)
    ul_x = np.where(below_diag, x - y, 0.0)
    ul_y = np.where(below_diag, 0.0, y - x)
    near_origin = x + y < 1.0
    ur_x = np.where(near_origin, x + y, 1.0)
    ur_y = np.where(near_origin, 0.0, x + y - 1.0)
    dl_x = np.where(near_origin, 0.0, x + y - 1.0)
    dl_y = np.where(near_origin, x + y, 1.0)
    return dr_x, dr_y, ur_x, ur_y, ul_x, ul_y, dl_x, dl_y


def anchors(x, y) -> AnchorSet:
    """Evaluate the four diagonal exit points for coordinates in [0,1]^2."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dr_x, dr_y, ur_x, ur_y, ul_x, ul_y, dl_x, dl_y = _anchor_components(x, y)
    return AnchorSet(down_right=_stack(dr_x, dr_y), up_right=_stack(ur_x, ur_y),
                     up_left=_stack(ul_x, ul_y), down_left=_stack(dl_x, dl_y))


def _weighted_components(x, y, rect_tl, rect_bl, rect_br, rect_tr,
                         wedge_up, wedge_left, wedge_down, wedge_right, total):
    """Anchor combination divided by twice the total mass, per component.

    The wedge anchors are axis-aligned boundary points, so their terms
    collapse: the up/down wedges only weight x, the left/right wedges only y.
    """
    dr_x, dr_y, ur_x, ur_y, ul_x, ul_y, dl_x, dl_y = _anchor_components(x, y)
    inv = 0.5 / total
    tx = (rect_tl * dr_x + rect_bl * ur_x + rect_br * ul_x + rect_tr * dl_x
          + (wedge_up + wedge_down) * x + wedge_left) * inv
    ty = (rect_tl * dr_y + rect_bl * ur_y + rect_br * ul_y + rect_tr * dl_y
          + (wedge_left + wedge_right) * y + wedge_up) * inv
    return tx, ty


def raw_map(x, y, tables: IntegralSet) -> np.ndarray:
    """Weighted anchor combination at the pixel containing (x, y).

    Table values are looked up at the containing pixel (no sub-pixel table
    interpolation); smoothness at sample positions comes later from bilinear
    interpolation of the per-pixel field.  Homogeneous of degree zero in the
    density: scaling the texture rescales every weight and the total alike.
    """
    if not tables.total > 0.0:
        raise SingularMass("total texture mass must be > 0")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    i, j = pixel_of(x, y, tables.k)
    tx, ty = _weighted_components(
        x, y,
        tables.rect_tl[j, i], tables.rect_bl[j, i],
        tables.rect_br[j, i], tables.rect_tr[j, i],
        tables.wedge_up[j, i], tables.wedge_left[j, i],
        tables.wedge_down[j, i], tables.wedge_right[j, i],
        tables.total,
    )
    return _stack(tx, ty)


class _FlatResponseCache:
    """Raw-map response of a flat texture, built once per resolution.

    By degree-zero homogeneity any constant value gives the same response, so
    the cache is keyed by k alone.  ``builds`` counts actual constructions;
    the regularizer contract is one (re)use per run, not one per iteration.
    """

    def __init__(self):
        self._cache: dict[int, np.ndarray] = {}
        self.builds = 0

    def clear(self):
        self._cache.clear()
        self.builds = 0

    def get(self, k: int) -> np.ndarray:
        if k not in self._cache:
            size = 1 << k
            tables = build_integral_set(np.ones((size, size)))
            self._cache[k] = _raw_targets_per_pixel(tables)
            self.builds += 1
        return self._cache[k]


flat_response = _FlatResponseCache()


def corrected_map(x, y, tables: IntegralSet, defect: np.ndarray) -> np.ndarray:
    """Defect-corrected targets: (x, y) + raw(x, y) - flat response, clamped.

    Exactly the identity (to float accumulation error) when the density is
    constant.  The defect is looked up at the containing pixel, matching the
    raw map's table lookup.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    i, j = pixel_of(x, y, tables.k)
    out = _stack(x, y) + raw_map(x, y, tables) - defect[j, i]
    return np.clip(out, 0.0, 1.0)


@njit(cache=True)
def _per_pixel_targets(rect_tl, rect_bl, rect_br, rect_tr, wedge_up, wedge_left,
                       wedge_down, wedge_right, total, scale, out):
    size = rect_tl.shape[0]
    inv = 0.5 / total
    for j in range(size):
        y = j * scale
        for i in range(size):
            x = i * scale
            if y < x:
                dr_x, dr_y = 1.0, 1.0 + y - x
                ul_x, ul_y = x - y, 0.0
            else:
                dr_x, dr_y = 1.0 - y + x, 1.0
                ul_x, ul_y = 0.0, y - x
            if x + y < 1.0:
                ur_x, ur_y = x + y, 0.0
                dl_x, dl_y = 0.0, x + y
            else:
                ur_x, ur_y = 1.0, x + y - 1.0
                dl_x, dl_y = x + y - 1.0, 1.0
            tl = rect_tl[j, i]
            bl = rect_bl[j, i]
            br = rect_br[j, i]
            tr = rect_tr[j, i]
            up = wedge_up[j, i]
            left = wedge_left[j, i]
            down = wedge_down[j, i]
            right = wedge_right[j, i]
            out[j, i, 0] = (tl * dr_x + bl * ur_x + br * ul_x + tr * dl_x
                            + (up + down) * x + left) * inv
            out[j, i, 1] = (tl * dr_y + bl * ur_y + br * ul_y + tr * dl_y
                            + (left + right) * y + up) * inv


def _raw_targets_per_pixel(tables: IntegralSet) -> np.ndarray:
    """raw_map at every pixel coordinate, without the per-pixel gather."""
    if not tables.total > 0.0:
        raise SingularMass("total texture mass must be > 0")
    size = 1 << tables.k
    out = np.empty((size, size, 2), dtype=np.float64)
    _per_pixel_targets(tables.rect_tl, tables.rect_bl, tables.rect_br,
                       tables.rect_tr, tables.wedge_up, tables.wedge_left,
                       tables.wedge_down, tables.wedge_right, tables.total,
                       2.0 ** -tables.k, out)
    return out


def build_field(tables: IntegralSet, defect: np.ndarray = None) -> DeformationField:
    """Corrected targets at every pixel coordinate 2**-k * (i, j)."""
    if defect is None:
        defect = flat_response.get(tables.k)
    targets = _raw_targets_per_pixel(tables) - defect
    X, Y = unit_coordinates(tables.k)
    targets[..., 0] += X
    targets[..., 1] += Y
    excursion = max(0.0, float(-targets.min()), float(targets.max() - 1.0))
    np.clip(targets, 0.0, 1.0, out=targets)
    return DeformationField(targets=targets, k=tables.k, max_excursion=excursion)


@njit(cache=True)
def _bilinear_kernel(targets, pts, out):
    size = targets.shape[0]
    for row in range(pts.shape[0]):
        sx = pts[row, 0] * size
        sy = pts[row, 1] * size
        i0 = int(np.floor(sx))
        j0 = int(np.floor(sy))
        if i0 < 0:
            i0 = 0
        elif i0 > size - 2:
            i0 = size - 2
        if j0 < 0:
            j0 = 0
        elif j0 > size - 2:
            j0 = size - 2
        fx = sx - i0
        fy = sy - j0
        w00 = (1.0 - fx) * (1.0 - fy)
        w10 = fx * (1.0 - fy)
        w01 = (1.0 - fx) * fy
        w11 = fx * fy
        for c in range(2):
            out[row, c] = (w00 * targets[j0, i0, c] + w10 * targets[j0, i0 + 1, c]
                           + w01 * targets[j0 + 1, i0, c]
                           + w11 * targets[j0 + 1, i0 + 1, c])


def sample_field(field: DeformationField, points: np.ndarray) -> np.ndarray:
    """Bilinear blend of the four pixel targets surrounding each point.

    Nodes sit at coordinates i * 2**-k, so the strip beyond the last node
    (x > 1 - 2**-k) uses the one-sided last cell; its linear extension keeps
    an identity field exactly the identity everywhere in [0,1]^2.
    """
    pts = np.asarray(points, dtype=np.float64)
    flat = np.ascontiguousarray(pts.reshape(-1, 2))
    out = np.empty_like(flat)
    _bilinear_kernel(field.targets, flat, out)
    return out.reshape(pts.shape)


def interpolate(field: DeformationField, point) -> np.ndarray:
    """Single-point convenience wrapper around sample_field."""
    return sample_field(field, np.asarray(point, dtype=np.float64))

import numpy as np
import pytest

import uncrowd as uc
from uncrowd.density import build_density
from uncrowd.errors import SingularMass
from uncrowd.integral import build_integral_set
from uncrowd.mapping import (
    anchors,
    build_field,
    corrected_map,
    flat_response,
    raw_map,
    sample_field,
)
from uncrowd.model import DeformationField, unit_coordinates

from oracles import region_tables


def identity_targets(k):
    X, Y = unit_coordinates(k)
    return np.stack([X, Y], axis=-1)


class TestAnchors:
    def test_reference_point(self):
        a = anchors(0.5, 0.25)  # below the diagonal, near the origin
        assert np.allclose(a.down_right, (1.0, 0.75))
        assert np.allclose(a.up_left, (0.25, 0.0))
        assert np.allclose(a.up_right, (0.75, 0.0))
        assert np.allclose(a.down_left, (0.0, 0.75))

    def test_degenerate_corner(self):
        a = anchors(0.0, 0.0)
        assert np.allclose(a.down_right, (1.0, 1.0))
        assert np.allclose(a.up_left, (0.0, 0.0))
        assert np.allclose(a.up_right, (0.0, 0.0))
        assert np.allclose(a.down_left, (0.0, 0.0))

    def test_seam_continuity_at_center(self):
        # (0.5, 0.5) sits on both branch seams; both sides must agree
        a = anchors(0.5, 0.5)
        assert np.allclose(a.down_right, (1.0, 1.0))
        assert np.allclose(a.up_left, (0.0, 0.0))
        assert np.allclose(a.up_right, (1.0, 0.0))
        assert np.allclose(a.down_left, (0.0, 1.0))

    def test_seams_are_continuous(self, rng):
        # approach each seam from both sides; the limits must match
        eps = 1e-9
        for t in rng.random(50):
            above = anchors(t, t + eps)
            below = anchors(t, t - eps) if t > eps else anchors(t, 0.0)
            assert np.allclose(above.down_right, below.down_right, atol=1e-6)
            assert np.allclose(above.up_left, below.up_left, atol=1e-6)
            x = t
            lo = anchors(x, 1.0 - x - eps)
            hi = anchors(x, 1.0 - x + eps)
            assert np.allclose(lo.up_right, hi.up_right, atol=1e-6)
            assert np.allclose(lo.down_left, hi.down_left, atol=1e-6)

    def test_anchors_on_boundary(self, rng):
        pts = rng.random((200, 2))
        a = anchors(pts[:, 0], pts[:, 1])
        for q in (a.down_right, a.up_right, a.up_left, a.down_left):
            on_edge = (np.isclose(q, 0.0) | np.isclose(q, 1.0)).any(axis=-1)
            assert on_edge.all()


class TestRawMap:
    def test_weights_sum_to_one(self, rng):
        t = build_integral_set(rng.random((16, 16)))
        weight = (t.rect_tl + t.rect_bl + t.rect_br + t.rect_tr
                  + t.wedge_up + t.wedge_left + t.wedge_down + t.wedge_right)
        assert np.allclose(weight / (2.0 * t.total), 1.0, atol=1e-9)

    def test_output_in_unit_square(self, rng):
        t = build_integral_set(rng.random((16, 16)) + 0.01)
        pts = rng.random((500, 2))
        out = raw_map(pts[:, 0], pts[:, 1], t)
        assert out.min() >= -1e-12 and out.max() <= 1.0 + 1e-12

    def test_against_bruteforce_tables(self, rng):
        d = rng.random((16, 16))
        t = build_integral_set(d)
        want_tables = region_tables(d)
        x = y = 0.53  # lands in pixel (8, 8)
        i, j = uc.pixel_of(x, y, 4)
        a = anchors(x, y)
        num = (want_tables[0][j, i] * a.down_right
               + want_tables[1][j, i] * a.up_right
               + want_tables[2][j, i] * a.up_left
               + want_tables[3][j, i] * a.down_left
               + want_tables[4][j, i] * np.array([x, 1.0])
               + want_tables[5][j, i] * np.array([1.0, y])
               + want_tables[6][j, i] * np.array([x, 0.0])
               + want_tables[7][j, i] * np.array([0.0, y]))
        want = num / (2.0 * d.sum())
        got = raw_map(x, y, t)
        assert np.abs(got - want).max() < 1e-9

    def test_homogeneity_in_density(self, rng):
        d = rng.random((32, 32)) + 0.1
        pts = rng.random((100, 2))
        a = raw_map(pts[:, 0], pts[:, 1], build_integral_set(d))
        b = raw_map(pts[:, 0], pts[:, 1], build_integral_set(d * 37.5))
        assert np.abs(a - b).max() < 1e-9

    def test_singular_mass(self):
        t = build_integral_set(np.zeros((4, 4)))
        with pytest.raises(SingularMass):
            raw_map(0.5, 0.5, t)

    def test_constant_equals_flat_response(self):
        flat_response.clear()
        t = build_integral_set(np.full((16, 16), 0.25))
        X, Y = unit_coordinates(4)
        got = raw_map(X, Y, t)
        assert np.abs(got - flat_response.get(4)).max() < 1e-9


class TestCorrectedMap:
    def test_identity_for_constant(self):
        t = build_integral_set(np.full((64, 64), 2.0))
        X, Y = unit_coordinates(6)
        out = corrected_map(X, Y, t, flat_response.get(6))
        assert np.abs(out - identity_targets(6)).max() <= 1e-6

    def test_clamped_output(self, rng):
        t = build_integral_set(rng.random((16, 16)) + 0.01)
        pts = rng.random((100, 2))
        out = corrected_map(pts[:, 0], pts[:, 1], t, flat_response.get(4))
        assert out.min() >= 0.0 and out.max() <= 1.0

    def test_blob_expands_locally(self, blob_dataset):
        # the Jacobian at the blob center, estimated by finite differences
        # of the corrected map, must expand area
        params = uc.RegularizationParams(k=7, kernel_size=8)
        t = build_integral_set(build_density(blob_dataset.positions, params))
        defect = flat_response.get(7)
        h = 2.0 ** -7
        cx, cy = 0.35, 0.5
        right = corrected_map(cx + h, cy, t, defect)
        left = corrected_map(cx - h, cy, t, defect)
        down = corrected_map(cx, cy + h, t, defect)
        up = corrected_map(cx, cy - h, t, defect)
        jac = np.array([(right - left) / (2 * h), (down - up) / (2 * h)]).T
        assert np.linalg.det(jac) > 1.0


class TestBuildField:
    def test_identity_field_for_constant(self):
        field = build_field(build_integral_set(np.full((32, 32), 1.0)))
        assert np.abs(field.targets - identity_targets(5)).max() <= 1e-6

    def test_targets_bounded(self, blob_dataset):
        params = uc.RegularizationParams(k=6, kernel_size=4)
        t = build_integral_set(build_density(blob_dataset.positions, params))
        field = build_field(t)
        assert field.targets.min() >= 0.0 and field.targets.max() <= 1.0

    def test_spot_check_against_corrected_map(self, rng, blob_dataset):
        params = uc.RegularizationParams(k=6, kernel_size=4)
        t = build_integral_set(build_density(blob_dataset.positions, params))
        defect = flat_response.get(6)
        field = build_field(t, defect)
        scale = 2.0 ** -6
        for _ in range(10):
            i, j = rng.integers(0, 64, size=2)
            want = corrected_map(i * scale, j * scale, t, defect)
            assert np.abs(field.targets[j, i] - want).max() < 1e-12


class TestSampleField:
    def test_stored_value_at_nodes(self, rng):
        k = 4
        targets = rng.random((16, 16, 2))
        field = DeformationField(targets=targets, k=k)
        scale = 2.0 ** -k
        pts = np.array([[3 * scale, 7 * scale], [0.0, 0.0],
                        [15 * scale, 15 * scale]])
        out = sample_field(field, pts)
        assert np.allclose(out[0], targets[7, 3], atol=1e-12)
        assert np.allclose(out[1], targets[0, 0], atol=1e-12)
        assert np.allclose(out[2], targets[15, 15], atol=1e-12)

    def test_identity_field_everywhere(self, rng):
        field = DeformationField(targets=identity_targets(5), k=5)
        pts = rng.random((300, 2))
        pts[:5] = [[0, 0], [1, 1], [1, 0], [0, 1], [0.999999, 0.5]]
        assert np.abs(sample_field(field, pts) - pts).max() < 1e-12

    def test_linear_field_reproduced_at_cell_centers(self):
        # bilinear interpolation reproduces linear functions exactly
        k = 4
        X, Y = unit_coordinates(k)
        targets = np.stack([0.25 * X + 0.5 * Y + 0.1, 0.3 * X - 0.2 * Y + 0.4],
                           axis=-1)
        field = DeformationField(targets=targets, k=k)
        scale = 2.0 ** -k
        centers = (np.mgrid[0:15, 0:15].reshape(2, -1).T + 0.5) * scale
        out = sample_field(field, centers)
        want_x = 0.25 * centers[:, 0] + 0.5 * centers[:, 1] + 0.1
        want_y = 0.3 * centers[:, 0] - 0.2 * centers[:, 1] + 0.4
        assert np.abs(out[:, 0] - want_x).max() < 1e-12
        assert np.abs(out[:, 1] - want_y).max() < 1e-12


class TestFlatResponseCache:
    def test_built_once_per_resolution(self):
        flat_response.clear()
        flat_response.get(4)
        flat_response.get(4)
        flat_response.get(5)
        assert flat_response.builds == 2

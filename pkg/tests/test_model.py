import numpy as np
import pytest
from hypothesis import given, strategies as st

import uncrowd as uc
from uncrowd.errors import (
    CoordinateOutOfRange,
    InvalidParams,
    LabelLengthMismatch,
    NonFiniteCoordinate,
)


class TestValidateDataset:
    def test_minmax_endpoints(self):
        ds = uc.validate_dataset([(0, 0), (2, 4)])
        assert np.allclose(ds.positions, [(0, 0), (1, 1)])

    def test_degenerate_axis_maps_to_half(self):
        ds = uc.validate_dataset([(0.5, 0.5)])
        assert np.allclose(ds.positions, [(0.5, 0.5)])
        ds = uc.validate_dataset([(3.0, 7.0)])
        assert np.allclose(ds.positions, [(0.5, 0.5)])

    def test_nan_rejected(self):
        with pytest.raises(NonFiniteCoordinate):
            uc.validate_dataset([(0.1, float("nan"))])

    def test_out_of_range_without_normalize(self):
        with pytest.raises(CoordinateOutOfRange):
            uc.validate_dataset([(0.1, 1.3)], normalize=False)

    def test_label_length_mismatch(self):
        with pytest.raises(LabelLengthMismatch):
            uc.validate_dataset([(0, 0), (1, 1)], labels=[1])

    def test_string_labels_coded(self):
        ds = uc.validate_dataset([(0, 0), (1, 1), (0.5, 0.5)], labels=["b", "a", "b"])
        assert ds.labels.tolist() == [1, 0, 1]

    def test_ids_are_row_order(self):
        ds = uc.validate_dataset([(0, 0), (1, 1)])
        assert ds.ids.tolist() == [0, 1]

    def test_idempotent(self, rng):
        pts = rng.random((50, 2)) * 3 - 1
        once = uc.validate_dataset(pts)
        twice = uc.validate_dataset(once.positions)
        assert np.array_equal(once.positions, twice.positions)

    def test_empty_allowed(self):
        assert uc.validate_dataset([]).n == 0


class TestPixelOf:
    def test_origin(self):
        assert uc.pixel_of(0.0, 0.0, 3) == (0, 0)

    def test_far_corner_clamps(self):
        assert uc.pixel_of(1.0, 1.0, 3) == (7, 7)

    def test_direct_evaluation(self):
        # floor(0.5 * 8), floor(0.25 * 8)
        assert uc.pixel_of(0.5, 0.25, 3) == (4, 2)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(1, 12))
    def test_round_trip_within_pixel(self, x, y, k):
        # strict inside the domain; the clamped right/bottom edge sits exactly
        # one pixel from its (clamped) pixel coordinate
        i, j = uc.pixel_of(x, y, k)
        scale = 2.0 ** -k
        assert abs(i * scale - x) < scale or (x == 1.0 and abs(i * scale - x) <= scale)
        assert abs(j * scale - y) < scale or (y == 1.0 and abs(j * scale - y) <= scale)


class TestParams:
    def test_negative_iterations(self):
        with pytest.raises(InvalidParams):
            uc.RegularizationParams(iterations=-1).validate()

    def test_epsilon_required_for_displacement_stop(self):
        with pytest.raises(InvalidParams):
            uc.RegularizationParams(stop="displacement", epsilon=0.0).validate()

    def test_defaults_valid(self):
        uc.RegularizationParams().validate()

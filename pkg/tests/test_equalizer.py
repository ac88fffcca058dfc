import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import uncrowd as uc
from uncrowd import DensityEqualizer


@pytest.fixture(scope="module")
def fitted():
    gen = np.random.default_rng(8)
    X = np.concatenate([gen.normal((2.0, 10.0), 0.3, (800, 2)),
                        gen.normal((5.0, 14.0), 0.5, (200, 2))])
    eq = DensityEqualizer(k=7, kernel_size=8, iterations=4)
    return X, eq.fit(X)


class TestEstimatorApi:
    def test_get_set_params_round_trip(self):
        eq = DensityEqualizer(k=8, iterations=5)
        params = eq.get_params()
        assert params["k"] == 8 and params["iterations"] == 5
        other = clone(eq)
        assert other.get_params() == params

    def test_not_fitted_error(self):
        with pytest.raises(NotFittedError):
            DensityEqualizer().transform([[0.5, 0.5]])

    def test_fit_transform_is_final_frame(self, fitted):
        X, eq = fitted
        out = eq.transform(X)
        assert np.array_equal(out, eq.run_.frame(eq.n_iter_))

    def test_transform_stays_in_unit_square(self, fitted, rng):
        X, eq = fitted
        new = rng.normal((3.0, 12.0), 1.0, (100, 2))
        out = eq.transform(new)
        assert out.min() >= 0.0 and out.max() <= 1.0

    def test_transition_levels(self, fitted):
        _X, eq = fitted
        assert np.array_equal(eq.transition(0.0), eq.run_.frame(0))
        mid = eq.transition(0.5)
        want = 0.5 * (eq.run_.frame(0) + eq.run_.frame(1))
        assert np.allclose(mid, want, atol=0)

    def test_reduces_overplotting(self, fitted):
        X, eq = fitted
        before = uc.overplotting(eq.run_.frame(0), 7)
        after = uc.overplotting(eq.transform(X), 7)
        assert after < before

    def test_record_metrics_flag(self):
        gen = np.random.default_rng(3)
        X = gen.normal(0.0, 1.0, (300, 2))
        eq = DensityEqualizer(k=6, iterations=2, record_metrics=True).fit(X)
        assert len(eq.run_.metrics) == 3
        assert eq.run_.metrics[0].trustworthiness == 1.0

    def test_degenerate_axis(self):
        X = np.column_stack([np.full(50, 2.0), np.linspace(0, 1, 50)])
        eq = DensityEqualizer(k=6, iterations=1).fit(X)
        out = eq.transform(X)
        assert out.shape == (50, 2)

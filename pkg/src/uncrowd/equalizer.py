"""Scikit-learn style front door for the density equalizer.

``fit`` learns the per-iteration deformation fields from a point set;
``transform`` pushes any point set through the composed fields.  Outputs live
in the unit square, the plot domain the deformation is defined on.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array

from .model import RegularizationParams, validate_dataset
from .regularize import map_through, run, transition_positions


class DensityEqualizer(BaseEstimator, TransformerMixin):
    """Deform the plane so the fitted samples approach uniform density.

    Parameters mirror the regularization knobs: texture resolution exponent
    ``k``, smoothing ``kernel_size`` in pixels, the iteration budget, the
    stopping rule, and the background density (None picks samples / pixels).
    After ``fit``, ``run_`` holds the full iteration record and ``fields_``
    the per-iteration deformation fields.
    """

    def __init__(self, k: int = 10, kernel_size: int = 8, iterations: int = 16,
                 stop: str = "fixed", epsilon: float = 1e-4,
                 time_budget: Optional[float] = None,
                 background: Optional[float] = None,
                 record_metrics: bool = False):
        self.k = k
        self.kernel_size = kernel_size
        self.iterations = iterations
        self.stop = stop
        self.epsilon = epsilon
        self.time_budget = time_budget
        self.background = background
        self.record_metrics = record_metrics

    def _params(self) -> RegularizationParams:
        return RegularizationParams(
            k=self.k, kernel_size=self.kernel_size, iterations=self.iterations,
            stop=self.stop, epsilon=self.epsilon, time_budget=self.time_budget,
            background=self.background,
        ).validate()

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 2:
            raise ValueError("DensityEqualizer expects (n, 2) coordinates")
        self.data_min_ = X.min(axis=0)
        span = X.max(axis=0) - self.data_min_
        self.degenerate_axis_ = span == 0.0
        self.data_span_ = np.where(self.degenerate_axis_, 1.0, span)
        dataset = validate_dataset(X, labels=None, normalize=True)
        self.run_ = run(dataset, self._params(),
                        collect_metrics="full" if self.record_metrics else "none")
        self.fields_ = self.run_.fields
        self.n_iter_ = self.run_.iterations
        return self

    def _to_unit(self, X: np.ndarray) -> np.ndarray:
        unit = (X - self.data_min_) / self.data_span_
        # a degenerate fitted axis pinned every sample to 0.5; do the same here
        unit[:, self.degenerate_axis_] = 0.5
        return np.clip(unit, 0.0, 1.0)

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "run_"):
            raise NotFittedError("fit the equalizer before calling transform")
        X = check_array(X, dtype=np.float64)
        return map_through(self.fields_, self._to_unit(X))

    def transition(self, level: float) -> np.ndarray:
        """Fitted-sample positions at a continuous iteration level."""
        if not hasattr(self, "run_"):
            raise NotFittedError("fit the equalizer before querying levels")
        return transition_positions(self.run_, level)

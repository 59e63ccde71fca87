"""Scikit-learn style wrappers so the maps compose with ML pipelines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .fd import estimate_fd
from .ffm import FfmParams, compute_ffm

__all__ = ["FractalFeatureMapper", "FractalDimension"]


def _iter_images(X):
    arr = np.asarray(X) if not isinstance(X, (list, tuple)) else X
    if isinstance(arr, np.ndarray) and arr.ndim == 2:
        return [arr], True
    if isinstance(arr, np.ndarray) and arr.ndim == 3:
        return list(arr), False
    if isinstance(arr, (list, tuple)):
        return [np.asarray(a) for a in arr], False
    raise ValueError(
        "expected a 2-D image, a 3-D image stack, or a sequence of 2-D images"
    )


class FractalFeatureMapper(TransformerMixin, BaseEstimator):
    """Stateless transformer mapping gray images to fractal feature maps.

    ``transform`` accepts a single 2-D image or a batch (3-D stack or list
    of 2-D images) and returns maps of matching layout.  ``fit`` only
    validates the parameters, so the transformer can be cloned and used in
    pipelines like any other preprocessing step.
    """

    def __init__(self, window: int = 5, step: int = 1, gray_levels: int = 256,
                 robust: bool = False, threads: int = 1):
        self.window = window
        self.step = step
        self.gray_levels = gray_levels
        self.robust = robust
        self.threads = threads

    def _params(self) -> FfmParams:
        return FfmParams(
            window=self.window,
            step=self.step,
            gray_levels=self.gray_levels,
            robust=self.robust,
        )

    def fit(self, X, y=None):
        self._params()
        return self

    def transform(self, X):
        params = self._params()
        images, single = _iter_images(X)
        maps = [compute_ffm(img, params, threads=self.threads) for img in images]
        if single:
            return maps[0]
        return np.stack(maps)


class FractalDimension(TransformerMixin, BaseEstimator):
    """Feature extractor producing one whole-image fractal dimension each.

    Returns a column vector, one row per image, so the output drops
    straight into feature matrices.
    """

    def __init__(self, scales=None, gray_levels: int = 256, robust: bool = False):
        self.scales = scales
        self.gray_levels = gray_levels
        self.robust = robust

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        images, _ = _iter_images(X)
        values = [
            estimate_fd(img, self.scales, self.gray_levels, self.robust).fd
            for img in images
        ]
        return np.asarray(values, dtype=np.float64).reshape(-1, 1)

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from ffmkit import FfmParams, FractalDimension, FractalFeatureMapper, compute_ffm, estimate_fd


class TestFractalFeatureMapper:
    def test_params_roundtrip(self):
        t = FractalFeatureMapper(window=7, step=2, robust=True)
        params = t.get_params()
        assert params["window"] == 7 and params["robust"] is True
        t2 = clone(t)
        assert t2.get_params() == params
        t2.set_params(step=3)
        assert t2.step == 3

    def test_single_image_matches_function(self, rng):
        img = rng.integers(0, 256, (16, 16), np.uint8)
        t = FractalFeatureMapper(window=5, step=2)
        out = t.fit(img).transform(img)
        assert np.array_equal(out, compute_ffm(img, FfmParams(window=5, step=2)))

    def test_batch_stack(self, rng):
        batch = rng.integers(0, 256, (3, 10, 12), np.uint8)
        out = FractalFeatureMapper().fit(batch).transform(batch)
        assert out.shape == batch.shape
        for img, mapped in zip(batch, out):
            assert np.array_equal(mapped, compute_ffm(img))

    def test_list_input(self, rng):
        imgs = [rng.integers(0, 256, (8, 8), np.uint8) for _ in range(2)]
        out = FractalFeatureMapper().transform(imgs)
        assert out.shape == (2, 8, 8)

    def test_invalid_params_fail_on_fit(self):
        with pytest.raises(ValueError):
            FractalFeatureMapper(window=4).fit(np.zeros((8, 8), np.uint8))

    def test_pipeline_composition(self, rng):
        imgs = rng.integers(0, 256, (2, 9, 9), np.uint8)
        pipe = Pipeline([
            ("ffm", FractalFeatureMapper(window=5)),
        ])
        assert pipe.fit_transform(imgs).shape == (2, 9, 9)


class TestFractalDimension:
    def test_column_output(self, rng):
        batch = rng.integers(0, 256, (4, 12, 12), np.uint8)
        out = FractalDimension().fit(batch).transform(batch)
        assert out.shape == (4, 1)
        for value, img in zip(out[:, 0], batch):
            assert value == estimate_fd(img).fd

    def test_single_image(self, rng):
        img = rng.integers(0, 256, (12, 12), np.uint8)
        out = FractalDimension(scales=(2, 3)).transform(img)
        assert out.shape == (1, 1)
        assert out[0, 0] == estimate_fd(img, scales=(2, 3)).fd

    def test_constant_batch(self):
        batch = np.zeros((2, 8, 8), np.uint8)
        out = FractalDimension().transform(batch)
        np.testing.assert_allclose(out, 2.0, atol=1e-9)

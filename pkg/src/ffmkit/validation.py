"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidScale


def check_gray_image(image, gray_levels: int = 256) -> np.ndarray:
    """Validate a 2-D gray-level image and return it as a uint8 array.

    Values must lie in [0, gray_levels - 1]; gray_levels is capped at 256
    because all file formats in the toolkit are 8-bit.
    """
    if not 2 <= gray_levels <= 256:
        raise ValueError(f"gray_levels must be in [2, 256], got {gray_levels}")
    arr = np.asarray(image)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer) and not arr.dtype == np.bool_:
        if np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.floor(arr)):
            arr = arr.astype(np.int64)
        else:
            raise ValueError(f"gray image must hold integers, got dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() > gray_levels - 1:
        raise ValueError(
            f"gray values must lie in [0, {gray_levels - 1}], "
            f"got [{arr.min()}, {arr.max()}]"
        )
    return np.ascontiguousarray(arr, dtype=np.uint8)


def check_binary_mask(mask) -> np.ndarray:
    """Validate a 2-D {0,1} mask and return it as a uint8 array."""
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D mask, got shape {arr.shape}")
    if arr.dtype == np.bool_:
        return np.ascontiguousarray(arr, dtype=np.uint8)
    vals = np.unique(arr)
    if not np.isin(vals, (0, 1)).all():
        raise ValueError(f"mask values must be 0 or 1, got {vals[:8]}")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def check_float_map(values) -> np.ndarray:
    """Validate a 2-D float map (finite values) and return it as float64."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D float map, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("float map contains non-finite values")
    return np.ascontiguousarray(arr)


def check_probability_map(values) -> np.ndarray:
    """Validate a float map whose values all lie in [0, 1]."""
    arr = check_float_map(values)
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(
            f"probabilities must lie in [0, 1], got [{arr.min()}, {arr.max()}]"
        )
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


def check_scales(scales: Sequence[int], side: int) -> tuple[int, ...]:
    """Validate a box-scale set against the side of the region it will tile."""
    ks = tuple(int(k) for k in scales)
    if not ks:
        raise InvalidScale("scale set must be non-empty")
    if any(k < 2 for k in ks):
        raise InvalidScale(f"scales must all be >= 2, got {ks}")
    if list(ks) != sorted(set(ks)):
        raise InvalidScale(f"scales must be strictly increasing, got {ks}")
    if ks[-1] > side:
        raise InvalidScale(f"scale {ks[-1]} exceeds region side {side}")
    return ks

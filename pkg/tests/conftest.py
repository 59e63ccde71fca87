import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_ring(size: int = 11, outer: int = 2, inner: int = 4) -> np.ndarray:
    """Square annulus: one component, one hole."""
    mask = np.zeros((size, size), dtype=np.uint8)
    mask[outer:size - outer, outer:size - outer] = 1
    lo = inner
    hi = size - inner
    if hi > lo:
        mask[lo:hi, lo:hi] = 0
    return mask


def break_ring(ring: np.ndarray) -> np.ndarray:
    """Cut a one-pixel slit through the top wall, opening the hole."""
    arc = ring.copy()
    col = arc.shape[1] // 2
    row = int(np.nonzero(arc[:, col])[0][0])
    while arc[row, col] == 1:
        arc[row, col] = 0
        row += 1
    return arc


def make_disk(size: int, center, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[:size, :size]
    cy, cx = center
    return (((yy - cy) ** 2 + (xx - cx) ** 2) <= radius ** 2).astype(np.uint8)

"""Box-counting fractal dimension of gray-level regions.

An image is treated as an intensity surface over the pixel grid.  For a box
side ``k`` the region is tiled into ``ceil(side/k)`` grid cells per axis
(truncated cells at the boundary are kept and use only their own pixels),
and each cell is covered by boxes of height ``h = (L-1) * k / M`` stacked
along the gray axis, where ``M`` is the shorter region side and ``L`` the
number of gray levels.  The cell's span ``l - m + 1`` between the boxes
holding its lowest and highest gray value is summed over all cells into a
box count ``N_k``.  The fractal dimension is the least-squares slope of
``log N_k`` against ``log g_k``, where ``g_k = ceil(M/k)`` is the number of
grid cells along the shorter side (the reciprocal of the effective scale
ratio; it equals ``M/k`` whenever ``k`` divides ``M``).

The robust variant replaces each cell's gray extremes with its mean +/- one
population standard deviation (clamped to the valid gray range) before the
span is taken, which damps the effect of isolated noise pixels.

All functions are pure and deterministic; integer box counts are computed
exactly, so identical inputs yield bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateFit, InvalidScale
from .validation import check_gray_image, check_scales

__all__ = [
    "FdEstimate",
    "default_scales",
    "box_span",
    "box_count_at_scale",
    "fit_loglog",
    "estimate_fd",
]


@dataclass(frozen=True)
class FdEstimate:
    """Result of a box-counting fit.

    fd         : estimated fractal dimension (slope of the log-log fit).
    points     : (log grid-count, log box-count) pairs, one per scale.
    r_squared  : coefficient of determination of the fit, in [0, 1].
    """

    fd: float
    points: tuple[tuple[float, float], ...]
    r_squared: float


def default_scales(side: int) -> tuple[int, ...]:
    """Default box sides for a region of the given side length.

    Runs from 2 to ``max(3, side // 2)`` so even the smallest supported
    regions (side 3..5) get the two-point set {2, 3}.
    """
    if side < 3:
        raise InvalidScale(f"region side must be >= 3 for default scales, got {side}")
    return tuple(range(2, max(3, side // 2) + 1))


def grid_count(side: int, k: int) -> int:
    """Number of grid cells along an axis of length ``side`` tiled by ``k``."""
    return -(-side // k)


def box_span(block, box_height: float) -> int:
    """Boxes of height ``box_height`` needed to span a cell's gray range.

    Gray value 0 falls into box 1 (box indices are 1-based), so the result
    is always >= 1 and a constant cell occupies exactly one box.
    """
    if box_height <= 0:
        raise ValueError(f"box height must be positive, got {box_height}")
    arr = np.asarray(block)
    if arr.size == 0:
        raise ValueError("block must be non-empty")
    return _span(float(arr.min()), float(arr.max()), float(box_height))


def _span(low: float, high: float, h: float) -> int:
    # Canonical span arithmetic; the FFM engine vectorizes these exact ops.
    m = max(1.0, math.ceil(low / h))
    l = max(1.0, math.ceil(high / h))
    return int(l) - int(m) + 1


def box_count_at_scale(
    region, k: int, gray_levels: int = 256, robust: bool = False
) -> int:
    """Total box count ``N_k`` of a region for one box side ``k``.

    Tiles the region into ``ceil(H/k) x ceil(W/k)`` cells (boundary cells
    truncated to available pixels) and sums ``box_span`` over them, using
    ``h = (L-1) * k / min(H, W)``.  In robust mode each cell's extremes are
    replaced by its mean +/- population standard deviation, clamped to
    ``[0, L-1]``.
    """
    img = check_gray_image(region, gray_levels)
    height, width = img.shape
    k = int(k)
    if k < 2 or k > min(height, width):
        raise InvalidScale(
            f"scale must satisfy 2 <= k <= {min(height, width)}, got {k}"
        )
    side = min(height, width)
    h = (gray_levels - 1) * k / side
    row_idx = np.arange(0, height, k)
    col_idx = np.arange(0, width, k)
    if robust:
        cells = _cell_sizes(height, k)[:, None] * _cell_sizes(width, k)[None, :]
        data = img.astype(np.int64)
        s1 = np.add.reduceat(np.add.reduceat(data, row_idx, axis=0), col_idx, axis=1)
        s2 = np.add.reduceat(
            np.add.reduceat(data * data, row_idx, axis=0), col_idx, axis=1
        )
        mu = s1 / cells
        var = s2 / cells - mu * mu
        sigma = np.sqrt(np.maximum(var, 0.0))
        top = float(gray_levels - 1)
        lows = np.clip(mu - sigma, 0.0, top)
        highs = np.clip(mu + sigma, 0.0, top)
    else:
        lows = np.minimum.reduceat(
            np.minimum.reduceat(img, row_idx, axis=0), col_idx, axis=1
        ).astype(np.float64)
        highs = np.maximum.reduceat(
            np.maximum.reduceat(img, row_idx, axis=0), col_idx, axis=1
        ).astype(np.float64)
    m = np.maximum(1.0, np.ceil(lows / h))
    l = np.maximum(1.0, np.ceil(highs / h))
    spans = l.astype(np.int64) - m.astype(np.int64) + 1
    return int(spans.sum())


def _cell_sizes(side: int, k: int) -> np.ndarray:
    sizes = np.full(grid_count(side, k), k, dtype=np.int64)
    if side % k:
        sizes[-1] = side % k
    return sizes


def fit_loglog(points: Sequence[tuple[float, float]]):
    """Ordinary least-squares line through (x, y) points.

    Returns (slope, intercept, r_squared).  Raises DegenerateFit when all x
    values coincide.  The slope is accumulated in input order with fixed
    per-point coefficients so repeated calls are bit-stable.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise DegenerateFit(f"need at least 2 points to fit, got {len(pts)}")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    if max(xs) == min(xs):
        raise DegenerateFit("all x values coincide")
    slope = 0.0
    for c, y in zip(_slope_coefficients(xs), ys):
        slope += c * y
    ybar = _mean(ys)
    intercept = ybar - slope * _mean(xs)
    ss_tot = 0.0
    ss_res = 0.0
    for x, y in pts:
        ss_tot += (y - ybar) ** 2
        ss_res += (y - (slope * x + intercept)) ** 2
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(min(1.0, max(0.0, r_squared)))


def _mean(values: Sequence[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def _slope_coefficients(xs: Sequence[float]) -> list[float]:
    """Per-point weights c_i with slope = sum(c_i * y_i) for an OLS line."""
    xbar = _mean(xs)
    sxx = 0.0
    for x in xs:
        sxx += (x - xbar) ** 2
    return [(x - xbar) / sxx for x in xs]


def estimate_fd(
    region,
    scales: Sequence[int] | None = None,
    gray_levels: int = 256,
    robust: bool = False,
) -> FdEstimate:
    """Box-counting fractal dimension estimate of a gray-level region.

    ``scales`` defaults to ``default_scales`` of the shorter region side.
    With a single scale the limit form ``fd = log N_k / log g_k`` is used
    instead of a fit.
    """
    img = check_gray_image(region, gray_levels)
    side = min(img.shape)
    ks = check_scales(scales if scales is not None else default_scales(side), side)
    points = []
    for k in ks:
        n_k = box_count_at_scale(img, k, gray_levels, robust)
        x = float(np.log(float(grid_count(side, k))))
        y = float(np.log(float(n_k)))
        points.append((x, y))
    if len(points) == 1:
        x, y = points[0]
        if x == 0.0:
            raise DegenerateFit("single scale equal to the region side")
        return FdEstimate(fd=y / x, points=tuple(points), r_squared=1.0)
    slope, _, r_squared = fit_loglog(points)
    return FdEstimate(fd=slope, points=tuple(points), r_squared=r_squared)

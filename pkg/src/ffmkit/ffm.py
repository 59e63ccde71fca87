"""Pixel-level fractal feature maps via a sliding box-counting window.

Every output pixel gets the fractal dimension of the w x w window centered
on it (the image is edge-replicate padded by w//2 so output and input have
identical dimensions).  With a step S > 1 only every S-th pixel per axis is
visited and the remaining pixels copy their nearest visited neighbor (ties
broken toward the top left).  The raw map is min-max normalized to [0, 1];
a constant raw map normalizes to all ones, which is neutral when the map is
used as a loss weight.

The engine never evaluates windows one by one.  For each box scale it takes
sliding minima/maxima (or sums, in robust mode) of the padded image for
each distinct cell shape and assembles per-window box counts from strided
views of those maps, so the arithmetic per window is exactly the per-region
computation of :mod:`ffmkit.fd` and results are bit-identical to evaluating
``estimate_fd`` on every window.  Work is optionally split across threads
by bands of visited output rows; bands are disjoint, so thread count and
scheduling cannot change the result.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateFit
from .fd import _slope_coefficients, default_scales, grid_count
from .validation import check_binary_mask, check_float_map, check_gray_image, check_scales

__all__ = [
    "FfmParams",
    "pad",
    "compute_ffm_raw",
    "normalize",
    "compute_ffm",
    "compute_ffm_label",
]


@dataclass(frozen=True)
class FfmParams:
    """Sliding-window parameters for fractal feature maps.

    window      : odd window side >= 3.
    step        : stride between visited pixels, 1 <= step <= window.
    gray_levels : number of gray levels L (values occupy [0, L-1]).
    robust      : use the mean +/- std cell spans instead of min/max.
    scales      : box sides; defaults to the fd-core default for the window.
    """

    window: int = 5
    step: int = 1
    gray_levels: int = 256
    robust: bool = False
    scales: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if not 1 <= self.step <= self.window:
            raise ValueError(
                f"step must satisfy 1 <= step <= window, got {self.step}"
            )
        if not 2 <= self.gray_levels <= 256:
            raise ValueError(f"gray_levels must be in [2, 256], got {self.gray_levels}")
        if self.scales is not None:
            object.__setattr__(
                self, "scales", check_scales(self.scales, self.window)
            )

    def resolved_scales(self) -> tuple[int, ...]:
        return self.scales if self.scales is not None else default_scales(self.window)


def pad(image, padding: int) -> np.ndarray:
    """Edge-replicate padding by ``padding`` pixels on every side."""
    if padding < 0:
        raise ValueError(f"padding must be >= 0, got {padding}")
    arr = check_gray_image(image, 256)
    if padding == 0:
        return arr.copy()
    return np.pad(arr, padding, mode="edge")


@dataclass(frozen=True)
class _ScalePlan:
    k: int
    h: float
    x: float
    offsets: tuple[int, ...]
    sizes: tuple[int, ...]


def _plan_scales(window: int, scales: Sequence[int], gray_levels: int):
    plans = []
    for k in scales:
        offsets = tuple(range(0, window, k))
        sizes = tuple(min(k, window - o) for o in offsets)
        plans.append(
            _ScalePlan(
                k=k,
                h=(gray_levels - 1) * k / window,
                x=float(np.log(float(grid_count(window, k)))),
                offsets=offsets,
                sizes=sizes,
            )
        )
    return plans


def _cell_reduce(src, shape, row0, col0, rows, cols, step, ufunc, dtype):
    """Per-cell reduction as elementwise ufunc folds over cell offsets.

    Entry (i, j) reduces ``src[row0 + i*step : +bh, col0 + j*step : +bw]``;
    min/max/sum over integers are order-free, so the fold order cannot
    change results.
    """
    bh, bw = shape
    r_hi = row0 + (rows - 1) * step + 1
    c_hi = col0 + (cols - 1) * step + 1
    acc = src[row0:r_hi:step, col0:c_hi:step].astype(dtype)
    for di in range(bh):
        for dj in range(bw):
            if di == 0 and dj == 0:
                continue
            ufunc(acc, src[row0 + di:r_hi + di:step, col0 + dj:c_hi + dj:step],
                  out=acc)
    return acc


class _CellStats:
    """Sliding per-cell statistics over a padded image slice.

    With ``step == 1`` full sliding maps are built once per distinct cell
    shape and shared between grid positions; with ``step > 1`` the folds
    run only on the strided slices that are actually visited, so the work
    shrinks with the square of the step.
    """

    def __init__(self, padded: np.ndarray, n_rows: int, n_cols: int, step: int,
                 robust: bool):
        self._p = padded
        self._rows = n_rows
        self._cols = n_cols
        self._step = step
        self._share = step == 1
        self._cache: dict = {}
        if robust:
            p64 = padded.astype(np.int64)
            self._sum_src = p64
            self._sqr_src = p64 * p64

    def _reduce(self, src, shape, row_off, col_off, ufunc, dtype, tag):
        if self._share:
            key = (tag, shape)
            full = self._cache.get(key)
            if full is None:
                bh, bw = shape
                full = _cell_reduce(
                    src, shape, 0, 0,
                    src.shape[0] - bh + 1, src.shape[1] - bw + 1, 1,
                    ufunc, dtype,
                )
                self._cache[key] = full
            return full[row_off:row_off + self._rows, col_off:col_off + self._cols]
        return _cell_reduce(src, shape, row_off, col_off,
                            self._rows, self._cols, self._step, ufunc, dtype)

    def extremes(self, shape, row_off, col_off):
        low = self._reduce(self._p, shape, row_off, col_off,
                           np.minimum, self._p.dtype, "min")
        high = self._reduce(self._p, shape, row_off, col_off,
                            np.maximum, self._p.dtype, "max")
        return low.astype(np.float64), high.astype(np.float64)

    def moments(self, shape, row_off, col_off):
        s1 = self._reduce(self._sum_src, shape, row_off, col_off,
                          np.add, np.int64, "sum")
        s2 = self._reduce(self._sqr_src, shape, row_off, col_off,
                          np.add, np.int64, "sqr")
        return s1, s2


def _band_slopes(padded: np.ndarray, row_start: int, n_rows: int, n_cols: int,
                 params: FfmParams, plans: Sequence[_ScalePlan],
                 coeffs: Sequence[float] | None) -> np.ndarray:
    """Fractal dimensions for a band of visited rows (all visited columns).

    ``row_start`` is the padded-image row of the band's first window;
    visited positions advance by ``params.step`` in both axes.
    """
    window = params.window
    step = params.step
    top = float(params.gray_levels - 1)
    band = padded[row_start:row_start + (n_rows - 1) * step + window, :]
    stats = _CellStats(band, n_rows, n_cols, step, params.robust)
    acc = None
    for plan, c in zip(plans, coeffs or [None] * len(plans)):
        n_k = np.zeros((n_rows, n_cols), dtype=np.int64)
        for a, bh in zip(plan.offsets, plan.sizes):
            for b, bw in zip(plan.offsets, plan.sizes):
                if params.robust:
                    s1, s2 = stats.moments((bh, bw), a, b)
                    cell = bh * bw
                    mu = s1 / cell
                    var = s2 / cell - mu * mu
                    sigma = np.sqrt(np.maximum(var, 0.0))
                    low = np.clip(mu - sigma, 0.0, top)
                    high = np.clip(mu + sigma, 0.0, top)
                else:
                    low, high = stats.extremes((bh, bw), a, b)
                m = np.maximum(1.0, np.ceil(low / plan.h))
                l = np.maximum(1.0, np.ceil(high / plan.h))
                n_k += l.astype(np.int64) - m.astype(np.int64) + 1
        y = np.log(n_k.astype(np.float64))
        if coeffs is None:
            return y / plans[0].x
        term = c * y
        acc = term if acc is None else acc + term
    return acc


def _nearest_visited_index(size: int, step: int) -> np.ndarray:
    """Index of the nearest visited position for each of ``size`` pixels.

    Visited positions are 0, step, 2*step, ...; exact midpoints resolve to
    the lower (top/left) neighbor.
    """
    n_visited = -(-size // step)
    i = np.arange(size)
    q = i // step
    rem = i - q * step
    use_next = (2 * rem > step) & (q + 1 < n_visited)
    return q + use_next.astype(np.int64)


def _resolve_threads(threads: int, n_tasks: int) -> int:
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return max(1, min(threads, n_tasks))


def _visited_map(image, params: FfmParams, threads: int) -> tuple[np.ndarray, tuple[int, int]]:
    """Window dimensions at the visited (strided) positions only."""
    img = check_gray_image(image, params.gray_levels)
    n_img_rows, n_img_cols = img.shape
    scales = check_scales(params.resolved_scales(), params.window)
    plans = _plan_scales(params.window, scales, params.gray_levels)
    if len(plans) > 1:
        xs = [p.x for p in plans]
        if max(xs) == min(xs):
            raise DegenerateFit("all scales give the same grid count")
        coeffs = _slope_coefficients(xs)
    else:
        if plans[0].x == 0.0:
            raise DegenerateFit("single scale equal to the window side")
        coeffs = None

    padded = pad(img, params.window // 2)
    step = params.step
    n_vis_rows = -(-n_img_rows // step)
    n_vis_cols = -(-n_img_cols // step)

    n_threads = _resolve_threads(threads, n_vis_rows)
    splits = np.array_split(np.arange(n_vis_rows), n_threads)
    jobs = [(int(chunk[0]) * step, len(chunk)) for chunk in splits if len(chunk)]

    def run(job):
        return _band_slopes(padded, job[0], job[1], n_vis_cols, params, plans, coeffs)

    if len(jobs) == 1:
        visited = run(jobs[0])
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            visited = np.vstack(list(pool.map(run, jobs)))
    return visited, (n_img_rows, n_img_cols)


def _fill_skipped(visited: np.ndarray, shape: tuple[int, int], step: int) -> np.ndarray:
    if step == 1:
        return visited
    rows = _nearest_visited_index(shape[0], step)
    cols = _nearest_visited_index(shape[1], step)
    return visited[np.ix_(rows, cols)]


def compute_ffm_raw(image, params: FfmParams | None = None, threads: int = 1) -> np.ndarray:
    """Raw (unnormalized) fractal feature map of a gray-level image.

    Each visited pixel holds the box-counting dimension of its window;
    skipped pixels copy the nearest visited value.  Output shape equals the
    input shape.  ``threads=0`` uses all cores; any thread count produces
    bit-identical output.
    """
    params = params or FfmParams()
    visited, shape = _visited_map(image, params, threads)
    return _fill_skipped(visited, shape, params.step)


def normalize(float_map) -> np.ndarray:
    """Min-max normalize a float map to [0, 1]; constant maps become 1.0."""
    arr = check_float_map(float_map)
    low = arr.min()
    high = arr.max()
    if high == low:
        return np.ones_like(arr)
    return (arr - low) / (high - low)


def compute_ffm(image, params: FfmParams | None = None, threads: int = 1) -> np.ndarray:
    """Normalized fractal feature map of an image (extra input channel).

    Equals ``normalize(compute_ffm_raw(...))`` bit for bit; normalization
    runs before the stride fill because filling only duplicates values.
    """
    params = params or FfmParams()
    visited, shape = _visited_map(image, params, threads)
    return _fill_skipped(normalize(visited), shape, params.step)


def compute_ffm_label(mask, params: FfmParams | None = None, threads: int = 1) -> np.ndarray:
    """Normalized fractal feature map of a {0,1} label mask (loss weights).

    The mask is lifted to gray levels {0, L-1} first, so structure edges
    dominate the map; degenerate (constant) labels yield all-ones weights.
    """
    params = params or FfmParams()
    arr = check_binary_mask(mask)
    gray = arr * np.uint8(params.gray_levels - 1)
    return compute_ffm(gray, params, threads)

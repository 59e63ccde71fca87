"""Independent reference implementations used to check ffmkit.

Everything here is deliberately naive (per-pixel loops, no tiling, no
parallelism, no shared code with the package) so tests compare two
independently written routes to the same definition.  Scalar logs use
np.log so that reference values share libm behavior with the vectorized
package code; all other arithmetic is plain IEEE-754 on Python floats.
"""

from __future__ import annotations

import math

import numpy as np


# box-counting dimension, one window/region at a time


def grid_counts(side: int, k: int) -> int:
    return -(-side // k)


def window_fd(window: np.ndarray, gray_levels: int = 256, robust: bool = False,
              scales=None) -> float:
    """Brute-force fractal dimension of one region via per-cell loops."""
    h_px, w_px = window.shape
    side = min(h_px, w_px)
    ks = list(scales) if scales is not None else list(
        range(2, max(3, side // 2) + 1)
    )
    xs = []
    ys = []
    for k in ks:
        n_k = region_box_count(window, k, gray_levels, robust)
        xs.append(float(np.log(float(grid_counts(side, k)))))
        ys.append(float(np.log(float(n_k))))
    if len(ks) == 1:
        return ys[0] / xs[0]
    xbar = sum(xs) / len(xs)
    sxx = 0.0
    for x in xs:
        sxx += (x - xbar) ** 2
    slope = 0.0
    for x, y in zip(xs, ys):
        slope += ((x - xbar) / sxx) * y
    return slope


def region_box_count(region: np.ndarray, k: int, gray_levels: int = 256,
                     robust: bool = False) -> int:
    h_px, w_px = region.shape
    side = min(h_px, w_px)
    h = (gray_levels - 1) * k / side
    top = float(gray_levels - 1)
    total = 0
    for a in range(0, h_px, k):
        for b in range(0, w_px, k):
            cell = region[a:min(a + k, h_px), b:min(b + k, w_px)]
            if robust:
                vals = [int(v) for v in cell.ravel().tolist()]
                n = len(vals)
                s1 = sum(vals)
                s2 = sum(v * v for v in vals)
                mu = s1 / n
                var = s2 / n - mu * mu
                sigma = math.sqrt(max(var, 0.0))
                low = min(top, max(0.0, mu - sigma))
                high = min(top, max(0.0, mu + sigma))
            else:
                low = float(cell.min())
                high = float(cell.max())
            m = max(1.0, math.ceil(low / h))
            l = max(1.0, math.ceil(high / h))
            total += int(l) - int(m) + 1
    return total


# sliding-window feature map, the slow way


def replicate_pad(image: np.ndarray, p: int) -> np.ndarray:
    rows, cols = image.shape
    out = np.empty((rows + 2 * p, cols + 2 * p), dtype=image.dtype)
    for i in range(rows + 2 * p):
        src_i = min(max(i - p, 0), rows - 1)
        for j in range(cols + 2 * p):
            src_j = min(max(j - p, 0), cols - 1)
            out[i, j] = image[src_i, src_j]
    return out


def nearest_visited(index: int, step: int, size: int) -> int:
    n_visited = -(-size // step)
    q, rem = divmod(index, step)
    if 2 * rem > step and q + 1 < n_visited:
        return (q + 1) * step
    return q * step


def ffm_oracle(image: np.ndarray, window: int = 5, step: int = 1,
               gray_levels: int = 256, robust: bool = False,
               normalized: bool = True) -> np.ndarray:
    """Single-threaded per-pixel feature map (the reference for the engine)."""
    rows, cols = image.shape
    p = window // 2
    padded = replicate_pad(image, p)
    raw = np.empty((rows, cols), dtype=np.float64)
    for i in range(0, rows, step):
        for j in range(0, cols, step):
            win = padded[i:i + window, j:j + window]
            raw[i, j] = window_fd(win, gray_levels, robust)
    for i in range(rows):
        si = nearest_visited(i, step, rows)
        for j in range(cols):
            sj = nearest_visited(j, step, cols)
            raw[i, j] = raw[si, sj]
    if not normalized:
        return raw
    low = raw.min()
    high = raw.max()
    if high == low:
        return np.ones_like(raw)
    return (raw - low) / (high - low)


# topology references


def flood_fill_components(mask: np.ndarray, connectivity: int) -> int:
    if connectivity == 4:
        moves = ((1, 0), (-1, 0), (0, 1), (0, -1))
    else:
        moves = tuple(
            (di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1)
            if (di, dj) != (0, 0)
        )
    rows, cols = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    count = 0
    for si in range(rows):
        for sj in range(cols):
            if mask[si, sj] and not seen[si, sj]:
                count += 1
                stack = [(si, sj)]
                seen[si, sj] = True
                while stack:
                    ci, cj = stack.pop()
                    for di, dj in moves:
                        ni, nj = ci + di, cj + dj
                        if (0 <= ni < rows and 0 <= nj < cols
                                and mask[ni, nj] and not seen[ni, nj]):
                            seen[ni, nj] = True
                            stack.append((ni, nj))
    return count


def betti_oracle(mask: np.ndarray) -> tuple[int, int]:
    b0 = flood_fill_components(mask, 8)
    if b0 == 0:
        return (0, 0)
    background = np.pad(1 - mask, 1, constant_values=1)
    return (b0, flood_fill_components(background, 4) - 1)


def edt_oracle(mask: np.ndarray) -> np.ndarray:
    rows, cols = mask.shape
    points = [(i, j) for i in range(rows) for j in range(cols) if mask[i, j]]
    out = np.full((rows, cols), np.inf)
    if not points:
        return out
    for i in range(rows):
        for j in range(cols):
            best = min((i - pi) ** 2 + (j - pj) ** 2 for pi, pj in points)
            out[i, j] = math.sqrt(best)
    return out


def hausdorff_oracle(a: np.ndarray, b: np.ndarray) -> float:
    pa = [(i, j) for i in range(a.shape[0]) for j in range(a.shape[1]) if a[i, j]]
    pb = [(i, j) for i in range(b.shape[0]) for j in range(b.shape[1]) if b[i, j]]
    if not pa and not pb:
        return 0.0

    def directed(src, dst):
        return max(
            min(math.dist(p, q) for q in dst) for p in src
        )

    return max(directed(pa, pb), directed(pb, pa))


def thinning_oracle(mask: np.ndarray) -> np.ndarray:
    """Loop-based two-subiteration thinning (reference for skeletonize)."""
    img = mask.astype(np.uint8).copy()

    def neighbors(arr, i, j):
        def at(y, x):
            if 0 <= y < arr.shape[0] and 0 <= x < arr.shape[1]:
                return int(arr[y, x])
            return 0
        return [at(i - 1, j), at(i - 1, j + 1), at(i, j + 1), at(i + 1, j + 1),
                at(i + 1, j), at(i + 1, j - 1), at(i, j - 1), at(i - 1, j - 1)]

    while True:
        changed = False
        for phase in (0, 1):
            to_delete = []
            for i in range(img.shape[0]):
                for j in range(img.shape[1]):
                    if not img[i, j]:
                        continue
                    n = neighbors(img, i, j)
                    b = sum(n)
                    ring = n + [n[0]]
                    a = sum(ring[t] == 0 and ring[t + 1] == 1 for t in range(8))
                    if not (2 <= b <= 6 and a == 1):
                        continue
                    p2, _, p4, _, p6, _, p8, _ = n
                    if phase == 0:
                        if p2 * p4 * p6 == 0 and p4 * p6 * p8 == 0:
                            to_delete.append((i, j))
                    else:
                        if p2 * p4 * p8 == 0 and p2 * p6 * p8 == 0:
                            to_delete.append((i, j))
            for i, j in to_delete:
                img[i, j] = 0
            changed = changed or bool(to_delete)
        if not changed:
            return img


# metric references


def auc_trapezoid(prob: np.ndarray, gt: np.ndarray) -> float:
    """Threshold-sweep ROC with trapezoidal integration, in percent."""
    scores = prob.ravel()
    labels = gt.ravel().astype(bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    thresholds = np.concatenate(([np.inf], np.unique(scores)[::-1]))
    points = []
    for t in thresholds:
        pred = scores >= t
        tp = int((pred & labels).sum())
        fp = int((pred & ~labels).sum())
        points.append((fp / n_neg, tp / n_pos))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return 100.0 * area


def confusion_oracle(pred: np.ndarray, gt: np.ndarray):
    tp = fp = fn = tn = 0
    for p, g in zip(pred.ravel().tolist(), gt.ravel().tolist()):
        if p and g:
            tp += 1
        elif p:
            fp += 1
        elif g:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def central_difference_grad(loss_fn, y_prob: np.ndarray, delta: float = 1e-5):
    """Central finite differences of a scalar loss over a probability map."""
    grad = np.zeros_like(y_prob, dtype=np.float64)
    it = np.nditer(y_prob, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        plus = y_prob.copy()
        minus = y_prob.copy()
        plus[idx] += delta
        minus[idx] -= delta
        grad[idx] = (loss_fn(plus) - loss_fn(minus)) / (2.0 * delta)
        it.iternext()
    return grad


# synthetic fractal surface


def fbm_surface(size: int, hurst: float, seed: int) -> np.ndarray:
    """Spectral synthesis of a fractional-Brownian surface on [0, 255].

    Random-phase spectrum with amplitude f^-(hurst+1), i.e. the 2-D power
    law f^-(2*hurst+2), whose graph has theoretical dimension 3 - hurst.
    """
    rng = np.random.default_rng(seed)
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    freq = np.sqrt(fy * fy + fx * fx)
    freq[0, 0] = 1.0
    amplitude = freq ** (-(hurst + 1.0))
    amplitude[0, 0] = 0.0
    phase = rng.uniform(0.0, 2.0 * np.pi, (size, size))
    surface = np.fft.ifft2(amplitude * np.exp(1j * phase)).real
    surface = surface - surface.min()
    surface = surface / surface.max()
    return np.round(surface * 255.0).astype(np.uint8)


def measured_hurst(surface: np.ndarray, lags=(1, 2, 4, 8, 16, 32)) -> float:
    """Structure-function Hurst exponent of a surface (generator check)."""
    z = surface.astype(np.float64)
    stds = []
    for d in lags:
        horiz = z[:, d:] - z[:, :-d]
        vert = z[d:, :] - z[:-d, :]
        stds.append(np.sqrt(0.5 * (horiz.var() + vert.var())))
    return float(np.polyfit(np.log(lags), np.log(stds), 1)[0])

"""Binary-mask topology primitives.

Edges and skeletons double as training targets for edge/skeleton decoders
and as ingredients of topology-aware metrics.  Foreground uses
8-connectivity and background 4-connectivity (the standard dual pair, which
avoids counting paradoxes between an object and its holes).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import EmptySetDistance
from .validation import check_binary_mask, check_same_shape

__all__ = [
    "BettiPair",
    "extract_edges",
    "skeletonize",
    "connected_components",
    "betti_numbers",
    "distance_transform",
    "hausdorff",
]

_STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)
_STRUCT_8 = np.ones((3, 3), dtype=np.uint8)


class BettiPair(NamedTuple):
    b0: int
    b1: int


def extract_edges(mask) -> np.ndarray:
    """Foreground pixels with a background 4-neighbor (border counts as background)."""
    m = check_binary_mask(mask)
    p = np.pad(m, 1)
    neighbor_min = np.minimum(
        np.minimum(p[:-2, 1:-1], p[2:, 1:-1]),
        np.minimum(p[1:-1, :-2], p[1:-1, 2:]),
    )
    return (m & (neighbor_min == 0)).astype(np.uint8)


def _neighbors(p: np.ndarray):
    # Clockwise from north: P2..P9 of the classic thinning notation.
    return (
        p[:-2, 1:-1], p[:-2, 2:], p[1:-1, 2:], p[2:, 2:],
        p[2:, 1:-1], p[2:, :-2], p[1:-1, :-2], p[:-2, :-2],
    )


def skeletonize(mask) -> np.ndarray:
    """Two-subiteration morphological thinning iterated to a fixpoint.

    Deletes simple boundary pixels alternately from the south-east and the
    north-west until nothing changes; preserves endpoints, so elongated
    shapes thin to one-pixel-wide centerlines.
    """
    m = check_binary_mask(mask).astype(bool)
    while True:
        changed = False
        for phase in (0, 1):
            p = np.pad(m, 1)
            n2, n3, n4, n5, n6, n7, n8, n9 = _neighbors(p)
            ring = (n2, n3, n4, n5, n6, n7, n8, n9, n2)
            b = sum(n.astype(np.uint8) for n in ring[:8])
            a = sum(
                ((~ring[i]) & ring[i + 1]).astype(np.uint8) for i in range(8)
            )
            cond = m & (b >= 2) & (b <= 6) & (a == 1)
            if phase == 0:
                cond &= ~(n2 & n4 & n6) & ~(n4 & n6 & n8)
            else:
                cond &= ~(n2 & n4 & n8) & ~(n2 & n6 & n8)
            if cond.any():
                m &= ~cond
                changed = True
        if not changed:
            return m.astype(np.uint8)


def connected_components(mask, connectivity: int = 8):
    """Label foreground components; labels follow raster discovery order.

    Returns ``(count, labels)`` with background 0 and components 1..count.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    m = check_binary_mask(mask)
    structure = _STRUCT_4 if connectivity == 4 else _STRUCT_8
    labels, count = ndimage.label(m, structure=structure)
    if count > 1:
        flat = labels.ravel()
        first = np.full(count + 1, flat.size, dtype=np.int64)
        np.minimum.at(first, flat, np.arange(flat.size))
        order = np.argsort(first[1:], kind="stable")
        remap = np.zeros(count + 1, dtype=labels.dtype)
        remap[order + 1] = np.arange(1, count + 1)
        labels = remap[labels]
    return int(count), labels


def betti_numbers(mask) -> BettiPair:
    """(components, holes) of a mask: 8-connected foreground count and the
    4-connected background count on a one-pixel background ring, minus one
    for the unbounded outside."""
    m = check_binary_mask(mask)
    b0, _ = connected_components(m, connectivity=8)
    if b0 == 0:
        return BettiPair(0, 0)
    background = np.pad(1 - m, 1, constant_values=1)
    outside, _ = connected_components(background, connectivity=4)
    return BettiPair(int(b0), int(outside - 1))


def distance_transform(mask) -> np.ndarray:
    """Exact Euclidean distance of every pixel to the nearest foreground
    pixel; an all-background mask maps to +inf everywhere."""
    m = check_binary_mask(mask)
    if not m.any():
        return np.full(m.shape, np.inf)
    return ndimage.distance_transform_edt(m == 0)


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two foreground point sets, in
    pixels.  Both masks empty gives 0; exactly one empty is an error."""
    ma = check_binary_mask(a)
    mb = check_binary_mask(b)
    check_same_shape(ma, mb)
    a_empty = not ma.any()
    b_empty = not mb.any()
    if a_empty and b_empty:
        return 0.0
    if a_empty or b_empty:
        raise EmptySetDistance("exactly one mask has no foreground")
    to_b = distance_transform(mb)
    to_a = distance_transform(ma)
    return float(max(to_b[ma > 0].max(), to_a[mb > 0].max()))

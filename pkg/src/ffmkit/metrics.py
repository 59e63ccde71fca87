"""Per-image segmentation metrics and dataset aggregation.

Volumetric scores (IoU, ACC, AUC, clDice) are reported as percentages, the
Betti error as a non-negative integer and the Hausdorff distance in pixels.
``evaluate`` computes a configurable subset per image and records metrics
whose preconditions fail (empty masks, single-class ground truth, ...) as
absent rather than failing the batch; ``mean_report`` averages per-image
reports field-wise over the images where the field is present.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import (
    DegenerateClasses,
    EmptyMask,
    EmptySetDistance,
    UndefinedIoU,
)
from .topology import betti_numbers, hausdorff, skeletonize
from .validation import (
    check_binary_mask,
    check_probability_map,
    check_same_shape,
)

__all__ = [
    "MetricsReport",
    "ALL_METRICS",
    "confusion",
    "iou",
    "acc",
    "auc",
    "cl_dice",
    "betti_error",
    "evaluate",
    "mean_report",
]

ALL_METRICS = ("iou", "acc", "auc", "cl_dice", "betti_error", "hd")


@dataclass
class MetricsReport:
    """Bundle of per-image metric values; None marks an inapplicable metric."""

    iou: float | None = None
    acc: float | None = None
    auc: float | None = None
    cl_dice: float | None = None
    betti_error: int | None = None
    hd: float | None = None

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def confusion(pred, gt) -> tuple[int, int, int, int]:
    """Pixel counts (TP, FP, FN, TN) between prediction and ground truth."""
    p = check_binary_mask(pred)
    g = check_binary_mask(gt)
    check_same_shape(p, g)
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & (1 - g)))
    fn = int(np.count_nonzero((1 - p) & g))
    tn = p.size - tp - fp - fn
    return tp, fp, fn, tn


def iou(pred, gt) -> float:
    """Intersection over union as a percentage; undefined on empty unions."""
    tp, fp, fn, _ = confusion(pred, gt)
    union = tp + fp + fn
    if union == 0:
        raise UndefinedIoU("both masks are empty")
    return 100.0 * tp / union


def acc(pred, gt) -> float:
    """Pixel accuracy as a percentage."""
    tp, fp, fn, tn = confusion(pred, gt)
    return 100.0 * (tp + tn) / (tp + fp + fn + tn)


def auc(prob, gt) -> float:
    """Area under the ROC curve as a percentage, from the rank statistic.

    Midranks handle ties, which makes the value identical to trapezoidal
    integration of the empirical ROC curve.
    """
    p = check_probability_map(prob)
    g = check_binary_mask(gt)
    check_same_shape(p, g)
    scores = p.ravel()
    positive = g.ravel() == 1
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateClasses("ground truth needs both classes for AUC")
    ranks = rankdata(scores)
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return 100.0 * u / (n_pos * n_neg)


def cl_dice(pred, gt) -> float:
    """Centerline Dice: harmonic mean of topology precision/sensitivity.

    Precision is the fraction of the prediction's skeleton inside the
    ground truth; sensitivity the fraction of the ground truth's skeleton
    inside the prediction.
    """
    p = check_binary_mask(pred)
    g = check_binary_mask(gt)
    check_same_shape(p, g)
    if not p.any() or not g.any():
        raise EmptyMask("clDice needs non-empty prediction and ground truth")
    skel_p = skeletonize(p)
    skel_g = skeletonize(g)
    t_prec = float(np.count_nonzero(skel_p & g)) / float(np.count_nonzero(skel_p))
    t_sens = float(np.count_nonzero(skel_g & p)) / float(np.count_nonzero(skel_g))
    if t_prec + t_sens == 0.0:
        return 0.0
    return 100.0 * 2.0 * t_prec * t_sens / (t_prec + t_sens)


def betti_error(pred, gt, mode: str = "sum") -> int:
    """Topology discrepancy |b0_p - b0_g| + |b1_p - b1_g|, or the b1 term
    alone with ``mode='b1'``."""
    if mode not in ("sum", "b1"):
        raise ValueError(f"mode must be 'sum' or 'b1', got {mode}")
    p = check_binary_mask(pred)
    g = check_binary_mask(gt)
    check_same_shape(p, g)
    bp = betti_numbers(p)
    bg = betti_numbers(g)
    err = abs(bp.b1 - bg.b1)
    if mode == "sum":
        err += abs(bp.b0 - bg.b0)
    return int(err)


def evaluate(
    prob,
    gt,
    threshold: float = 0.5,
    betti_mode: str = "sum",
    metrics: Sequence[str] | None = None,
) -> MetricsReport:
    """Score one probability map against a ground-truth mask.

    The map is binarized at ``threshold`` (>= is foreground) for the mask
    metrics; AUC uses the probabilities directly.  ``metrics`` selects a
    subset of ``ALL_METRICS`` (e.g. dropping clDice and Betti error for
    non-tubular data).  Metrics whose preconditions fail are left absent.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    selected = tuple(metrics) if metrics is not None else ALL_METRICS
    unknown = set(selected) - set(ALL_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    p = check_probability_map(prob)
    g = check_binary_mask(gt)
    check_same_shape(p, g)
    pred = (p >= threshold).astype(np.uint8)

    report = MetricsReport()
    recoverable = (UndefinedIoU, DegenerateClasses, EmptyMask, EmptySetDistance)
    computations = {
        "iou": lambda: iou(pred, g),
        "acc": lambda: acc(pred, g),
        "auc": lambda: auc(p, g),
        "cl_dice": lambda: cl_dice(pred, g),
        "betti_error": lambda: betti_error(pred, g, betti_mode),
        "hd": lambda: hausdorff(pred, g),
    }
    for name in selected:
        try:
            setattr(report, name, computations[name]())
        except recoverable:
            pass
    return report


def mean_report(reports: Iterable[MetricsReport]) -> MetricsReport:
    """Field-wise arithmetic mean over the reports where a field is present."""
    reports = list(reports)
    out = MetricsReport()
    for f in fields(MetricsReport):
        values = [getattr(r, f.name) for r in reports
                  if getattr(r, f.name) is not None]
        if values:
            setattr(out, f.name, float(np.mean(values)))
    return out

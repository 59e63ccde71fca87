"""Segmentation losses with analytic gradients.

All losses are plain reductions over (ground truth, probability) map pairs;
no autograd framework is involved.  Gradients are taken with respect to the
predicted probabilities and are meant for verification and for consumers
that do their own backpropagation.  Reductions use numpy's deterministic
pairwise summation, so repeated evaluations are bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_binary_mask, check_probability_map, check_same_shape

__all__ = [
    "LossWeights",
    "soft_iou_loss",
    "bce_loss",
    "global_loss",
    "constrained_loss",
    "grad_soft_iou",
    "grad_bce",
]


@dataclass(frozen=True)
class LossWeights:
    """Composite-loss coefficients and numeric guards.

    alpha/beta/gamma weight the object/edge/skeleton terms (defaults 1.0,
    0.5, 0.5); eta smooths the soft-IoU denominator; clamp_eps keeps the
    BCE logs finite.
    """

    alpha: float = 1.0
    beta: float = 0.5
    gamma: float = 0.5
    eta: float = 1.0
    clamp_eps: float = 1e-7

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if not 0.0 < self.clamp_eps < 0.5:
            raise ValueError(f"clamp_eps must be in (0, 0.5), got {self.clamp_eps}")


def _check_pair(y_true, y_prob, weights=None):
    y = check_binary_mask(y_true).astype(np.float64)
    p = check_probability_map(y_prob)
    check_same_shape(y, p)
    if weights is None:
        return y, p, None
    w = np.asarray(weights, dtype=np.float64)
    check_same_shape(y, w)
    if w.min() < 0:
        raise ValueError("weights must be non-negative")
    return y, p, w


def _iou_sums(y, p, w, eta):
    inter = y * p
    union = y + p - inter
    if w is not None:
        inter = w * inter
        union = w * union
    return float(inter.sum()), float(union.sum()) + eta


def soft_iou_loss(y_true, y_prob, eta: float = 1.0, weights=None) -> float:
    """Differentiable soft-IoU loss, optionally pixel-weighted.

    ``1 - sum(w*y*p) / (sum(w*(y + p - y*p)) + eta)``; with no weights the
    plain smoothed IoU.  Result lies in [0, 1] and unit weights reproduce
    the unweighted value exactly.
    """
    y, p, w = _check_pair(y_true, y_prob, weights)
    num, den = _iou_sums(y, p, w, eta)
    return 1.0 - num / den


def bce_loss(y_true, y_prob, clamp_eps: float = 1e-7) -> float:
    """Mean binary cross entropy with probabilities clamped away from 0/1."""
    y, p, _ = _check_pair(y_true, y_prob)
    q = np.clip(p, clamp_eps, 1.0 - clamp_eps)
    terms = y * np.log(q) + (1.0 - y) * np.log(1.0 - q)
    return float(-terms.sum() / y.size)


def global_loss(
    object_loss: float,
    edge_loss: float,
    skeleton_loss: float,
    weights: LossWeights | None = None,
) -> float:
    """Weighted sum alpha*object + beta*edge + gamma*skeleton."""
    w = weights or LossWeights()
    for name, value in (("object", object_loss), ("edge", edge_loss),
                        ("skeleton", skeleton_loss)):
        if not np.isfinite(value):
            raise ValueError(f"{name} loss must be finite, got {value}")
    return w.alpha * object_loss + w.beta * edge_loss + w.gamma * skeleton_loss


def constrained_loss(
    object_pair,
    edge_pair,
    skeleton_pair,
    ffm_label,
    weights: LossWeights | None = None,
) -> float:
    """Composite loss with the object term pixel-weighted by an FFM map.

    Each pair is ``(y_true, y_prob)``.  The weight map enters both sums of
    the object soft-IoU term, so all-ones weights reduce this exactly to
    ``global_loss`` over the three component losses.
    """
    w = weights or LossWeights()
    obj = soft_iou_loss(object_pair[0], object_pair[1], eta=w.eta, weights=ffm_label)
    edge = bce_loss(edge_pair[0], edge_pair[1], clamp_eps=w.clamp_eps)
    skel = bce_loss(skeleton_pair[0], skeleton_pair[1], clamp_eps=w.clamp_eps)
    return global_loss(obj, edge, skel, w)


def grad_soft_iou(y_true, y_prob, eta: float = 1.0, weights=None) -> np.ndarray:
    """Per-pixel derivative of ``soft_iou_loss`` with respect to y_prob."""
    y, p, w = _check_pair(y_true, y_prob, weights)
    num, den = _iou_sums(y, p, w, eta)
    ones = np.ones_like(y) if w is None else w
    # d(num)/dp = w*y ; d(den)/dp = w*(1 - y)
    return -(ones * y * den - num * ones * (1.0 - y)) / (den * den)


def grad_bce(y_true, y_prob, clamp_eps: float = 1e-7) -> np.ndarray:
    """Per-pixel derivative of ``bce_loss`` at interior points.

    Uses the clamped probabilities in the quotients but does not zero the
    gradient where the clamp is active.
    """
    y, p, _ = _check_pair(y_true, y_prob)
    q = np.clip(p, clamp_eps, 1.0 - clamp_eps)
    return (-(y / q) + (1.0 - y) / (1.0 - q)) / y.size

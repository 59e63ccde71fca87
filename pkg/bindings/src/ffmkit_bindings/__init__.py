"""In-process array entry points for training pipelines.

Three functions cover the integration surface: ``ffm`` (feature-map
channels and loss-weight maps), ``losses`` (the three-head composite loss
with per-head gradients), and ``eval_pair`` (per-image metric records).
Everything delegates to ffmkit in the same process, so no file round-trips
are involved; feature maps come back as float32, bit-identical to the
payload the ffmkit CLI writes into ``.ffm`` containers.

Contiguous row-major inputs are used zero-copy; anything else is copied
once into a contiguous buffer.  The heavy kernels run inside numpy, which
drops the interpreter lock, and all entry points are pure functions, so
concurrent calls from host threads are safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ffmkit import (
    FfmParams,
    LossWeights,
    bce_loss,
    compute_ffm,
    compute_ffm_label,
    evaluate,
    grad_bce,
    grad_soft_iou,
    soft_iou_loss,
)

__all__ = ["ffm", "losses", "eval_pair", "LossBundle"]

__version__ = "0.1.0"


def ffm(
    image,
    window: int = 5,
    step: int = 1,
    robust: bool = False,
    gray_levels: int = 256,
    label: bool = False,
    threads: int = 0,
) -> np.ndarray:
    """Normalized fractal feature map of an image (or mask, with ``label``).

    Returns a C-contiguous float32 array of the input shape, equal bit for
    bit to the ``.ffm`` payload the CLI writes for the same input.
    """
    arr = np.ascontiguousarray(image)
    params = FfmParams(window=window, step=step, gray_levels=gray_levels,
                       robust=robust)
    if label:
        out = compute_ffm_label(arr, params, threads=threads)
    else:
        out = compute_ffm(arr, params, threads=threads)
    return np.ascontiguousarray(out, dtype=np.float32)


@dataclass(frozen=True)
class LossBundle:
    """Composite loss value with its parts and per-head gradients."""

    total: float
    object_loss: float
    edge_loss: float
    skeleton_loss: float
    object_grad: np.ndarray
    edge_grad: np.ndarray
    skeleton_grad: np.ndarray


def losses(
    y_true,
    y_prob,
    weights=None,
    alpha: float = 1.0,
    beta: float = 0.5,
    gamma: float = 0.5,
    eta: float = 1.0,
    clamp_eps: float = 1e-7,
) -> LossBundle:
    """Three-head composite loss and gradients for one training sample.

    ``y_true`` and ``y_prob`` stack the object, edge, and skeleton maps as
    (3, H, W) arrays (or sequences of three 2-D arrays).  The object head
    uses the smoothed soft-IoU loss, optionally pixel-weighted by
    ``weights`` (an FFM label map); edge and skeleton heads use clamped
    BCE.  The total is ``alpha*object + beta*edge + gamma*skeleton``;
    gradients are with respect to each head's probabilities and include
    the head coefficient, returned as float32.
    """
    truths = [np.ascontiguousarray(t) for t in y_true]
    probs = [np.ascontiguousarray(p) for p in y_prob]
    if len(truths) != 3 or len(probs) != 3:
        raise ValueError("expected object, edge, and skeleton map triples")
    w = None if weights is None else np.ascontiguousarray(weights)
    LossWeights(alpha=alpha, beta=beta, gamma=gamma, eta=eta,
                clamp_eps=clamp_eps)

    object_loss = soft_iou_loss(truths[0], probs[0], eta=eta, weights=w)
    edge_loss = bce_loss(truths[1], probs[1], clamp_eps=clamp_eps)
    skeleton_loss = bce_loss(truths[2], probs[2], clamp_eps=clamp_eps)

    def f32(a):
        return np.ascontiguousarray(a, dtype=np.float32)

    return LossBundle(
        total=alpha * object_loss + beta * edge_loss + gamma * skeleton_loss,
        object_loss=object_loss,
        edge_loss=edge_loss,
        skeleton_loss=skeleton_loss,
        object_grad=f32(alpha * grad_soft_iou(truths[0], probs[0], eta=eta,
                                              weights=w)),
        edge_grad=f32(beta * grad_bce(truths[1], probs[1],
                                      clamp_eps=clamp_eps)),
        skeleton_grad=f32(gamma * grad_bce(truths[2], probs[2],
                                           clamp_eps=clamp_eps)),
    )


def eval_pair(
    prob,
    gt,
    threshold: float = 0.5,
    betti_mode: str = "sum",
    metrics=None,
) -> dict:
    """Score one probability map against a mask; absent metrics are None."""
    report = evaluate(
        np.ascontiguousarray(prob, dtype=np.float64),
        np.ascontiguousarray(gt),
        threshold=threshold,
        betti_mode=betti_mode,
        metrics=metrics,
    )
    return report.to_dict()

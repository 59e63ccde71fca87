"""Fractal feature maps for tubular-structure segmentation pipelines.

Pixel-level fractal dimension maps computed with a sliding box-counting
window, edge/skeleton ground-truth extraction, FFM-weighted losses with
analytic gradients, and volumetric/topological/distance evaluation metrics.
"""

from .bench import run_benchmark
from .errors import (
    CorruptFile,
    DegenerateClasses,
    DegenerateFit,
    DimensionMismatch,
    EmptyMask,
    EmptySetDistance,
    FfmkitError,
    InvalidScale,
    NotBinaryMask,
    OutOfRange,
    UndefinedIoU,
    UnsupportedFormat,
)
from .estimators import FractalDimension, FractalFeatureMapper
from .fd import (
    FdEstimate,
    box_count_at_scale,
    box_span,
    default_scales,
    estimate_fd,
    fit_loglog,
)
from .ffm import (
    FfmParams,
    compute_ffm,
    compute_ffm_label,
    compute_ffm_raw,
    normalize,
    pad,
)
from .io import (
    export_png16,
    read_ffm,
    read_image,
    read_mask,
    read_probability_map,
    write_ffm,
    write_mask,
)
from .losses import (
    LossWeights,
    bce_loss,
    constrained_loss,
    global_loss,
    grad_bce,
    grad_soft_iou,
    soft_iou_loss,
)
from .metrics import (
    ALL_METRICS,
    MetricsReport,
    acc,
    auc,
    betti_error,
    cl_dice,
    confusion,
    evaluate,
    iou,
    mean_report,
)
from .topology import (
    BettiPair,
    betti_numbers,
    connected_components,
    distance_transform,
    extract_edges,
    hausdorff,
    skeletonize,
)

__version__ = "0.1.0"

__all__ = [
    "FfmkitError", "InvalidScale", "DegenerateFit", "DimensionMismatch",
    "EmptySetDistance", "UndefinedIoU", "DegenerateClasses", "EmptyMask",
    "UnsupportedFormat", "NotBinaryMask", "CorruptFile", "OutOfRange",
    "FdEstimate", "default_scales", "box_span", "box_count_at_scale",
    "fit_loglog", "estimate_fd",
    "FfmParams", "pad", "compute_ffm_raw", "normalize", "compute_ffm",
    "compute_ffm_label",
    "LossWeights", "soft_iou_loss", "bce_loss", "global_loss",
    "constrained_loss", "grad_soft_iou", "grad_bce",
    "BettiPair", "extract_edges", "skeletonize", "connected_components",
    "betti_numbers", "distance_transform", "hausdorff",
    "MetricsReport", "ALL_METRICS", "confusion", "iou", "acc", "auc",
    "cl_dice", "betti_error", "evaluate", "mean_report",
    "read_image", "read_mask", "read_probability_map", "write_ffm",
    "read_ffm", "export_png16", "write_mask",
    "FractalFeatureMapper", "FractalDimension",
    "run_benchmark",
]

"""Exception types raised across the toolkit."""


class FfmkitError(Exception):
    """Base class for all ffmkit errors."""


class InvalidScale(FfmkitError, ValueError):
    """Box scale is < 2 or exceeds the region side."""


class DegenerateFit(FfmkitError, ValueError):
    """Log-log fit is impossible because all x values coincide."""


class DimensionMismatch(FfmkitError, ValueError):
    """Two arrays that must share a shape do not."""


class EmptySetDistance(FfmkitError, ValueError):
    """Hausdorff distance requested with exactly one empty mask."""


class UndefinedIoU(FfmkitError, ValueError):
    """IoU requested while the union of both masks is empty."""


class DegenerateClasses(FfmkitError, ValueError):
    """AUC requested without both positive and negative pixels."""


class EmptyMask(FfmkitError, ValueError):
    """A metric that needs foreground pixels received an empty mask."""


class UnsupportedFormat(FfmkitError, ValueError):
    """Input file is not an 8-bit grayscale PGM/PNG."""


class NotBinaryMask(FfmkitError, ValueError):
    """Mask file contains values other than {0, 255}."""


class CorruptFile(FfmkitError, ValueError):
    """File violates its declared byte layout."""


class OutOfRange(FfmkitError, ValueError):
    """Float map values fall outside the required [0, 1] range."""

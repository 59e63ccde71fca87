"""File codecs: 8-bit grayscale images/masks and the FFM float container.

The .ffm container is fully specified so independent tooling can parse it:

    bytes 0..3   magic "FFM1"
    bytes 4..7   width,  unsigned 32-bit little-endian
    bytes 8..11  height, unsigned 32-bit little-endian
    bytes 12..   width*height IEEE-754 float32 little-endian, row-major

Payload round-trips are bit-exact.  Readers reject anything that violates
the declared contracts instead of coercing.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptFile, NotBinaryMask, OutOfRange, UnsupportedFormat

__all__ = [
    "read_image",
    "read_mask",
    "read_probability_map",
    "write_ffm",
    "read_ffm",
    "export_png16",
    "write_mask",
]

FFM_MAGIC = b"FFM1"


def _parse_pgm(data: bytes, path: str) -> np.ndarray:
    # Header = magic, width, height, maxval as whitespace/comment-separated
    # tokens; P5 pixels follow the single whitespace byte after maxval.
    pos = 2
    tokens = []
    while len(tokens) < 3:
        if pos >= len(data):
            raise CorruptFile(f"{path}: truncated PGM header")
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                raise CorruptFile(f"{path}: unterminated PGM comment")
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise CorruptFile(f"{path}: malformed PGM header") from exc
    if width <= 0 or height <= 0:
        raise CorruptFile(f"{path}: bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"{path}: PGM maxval must be 255, got {maxval}")
    if data[:2] == b"P5":
        pos += 1  # single whitespace after maxval
        pixels = data[pos:pos + width * height]
        if len(pixels) != width * height:
            raise CorruptFile(f"{path}: PGM payload shorter than header promises")
        return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()
    values = data[pos:].split()
    if len(values) != width * height:
        raise CorruptFile(
            f"{path}: expected {width * height} ASCII samples, got {len(values)}"
        )
    try:
        arr = np.array([int(v) for v in values], dtype=np.int64)
    except ValueError as exc:
        raise CorruptFile(f"{path}: non-numeric PGM sample") from exc
    if arr.min() < 0 or arr.max() > 255:
        raise CorruptFile(f"{path}: PGM sample outside [0, 255]")
    return arr.astype(np.uint8).reshape(height, width)


def _read_png(path: str) -> np.ndarray:
    try:
        with Image.open(path) as im:
            if im.mode != "L":
                raise UnsupportedFormat(
                    f"{path}: need 8-bit grayscale PNG, got mode {im.mode!r}"
                )
            return np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise CorruptFile(f"{path}: not a decodable PNG") from exc


def read_image(path) -> np.ndarray:
    """Read an 8-bit grayscale PGM (P5/P2) or PNG into a uint8 array."""
    path = str(path)
    data = Path(path).read_bytes()
    if data[:2] in (b"P5", b"P2"):
        return _parse_pgm(data, path)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path)
    raise UnsupportedFormat(f"{path}: not a PGM or PNG file")


def read_mask(path) -> np.ndarray:
    """Read a binary mask image; pixels must be 0 or 255 and map to {0, 1}."""
    arr = read_image(path)
    bad = ~np.isin(arr, (0, 255))
    if bad.any():
        raise NotBinaryMask(
            f"{path}: mask contains values other than 0/255, e.g. "
            f"{int(arr[bad][0])}"
        )
    return (arr == 255).astype(np.uint8)


def read_probability_map(path) -> np.ndarray:
    """Read a probability map: .ffm floats, or an 8-bit image scaled by 255.

    Values must lie in [0, 1].
    """
    path = str(path)
    if Path(path).read_bytes()[:4] == FFM_MAGIC:
        arr = read_ffm(path).astype(np.float64)
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise OutOfRange(f"{path}: probabilities must lie in [0, 1]")
        return arr
    return read_image(path).astype(np.float64) / 255.0


def write_ffm(float_map, path) -> None:
    """Write a float map to the .ffm container (payload stored as float32)."""
    arr = np.ascontiguousarray(np.asarray(float_map, dtype=np.float32))
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D map, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("cannot write non-finite values to .ffm")
    height, width = arr.shape
    header = FFM_MAGIC + struct.pack("<II", width, height)
    payload = arr.astype("<f4", copy=False).tobytes(order="C")
    Path(path).write_bytes(header + payload)


def read_ffm(path) -> np.ndarray:
    """Read a .ffm container back into a float32 array (bit-exact payload)."""
    path = str(path)
    data = Path(path).read_bytes()
    if len(data) < 12:
        raise CorruptFile(f"{path}: shorter than the 12-byte header")
    if data[:4] != FFM_MAGIC:
        raise CorruptFile(f"{path}: bad magic {data[:4]!r}")
    width, height = struct.unpack("<II", data[4:12])
    expected = 12 + 4 * width * height
    if width == 0 or height == 0:
        raise CorruptFile(f"{path}: zero dimension {width}x{height}")
    if len(data) != expected:
        raise CorruptFile(
            f"{path}: payload is {len(data) - 12} bytes, header promises "
            f"{expected - 12}"
        )
    arr = np.frombuffer(data[12:], dtype="<f4").reshape(height, width)
    if not np.isfinite(arr).all():
        raise CorruptFile(f"{path}: payload contains non-finite floats")
    return arr.astype(np.float32, copy=True)


def export_png16(float_map, path) -> None:
    """Write a [0, 1] float map as a 16-bit grayscale PNG (v -> v*65535)."""
    arr = np.asarray(float_map, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D map, got shape {arr.shape}")
    if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
        raise OutOfRange("PNG16 export needs all values in [0, 1]")
    quantized = np.floor(arr * 65535.0 + 0.5).astype(np.uint16)
    Image.fromarray(quantized).save(str(path), format="PNG")


def write_mask(mask, path) -> None:
    """Write a {0, 1} mask as a binary PGM (P5) with values {0, 255}."""
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D mask, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("mask values must be 0 or 1")
    out = (arr.astype(np.uint8) * 255)
    height, width = out.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + out.tobytes(order="C"))

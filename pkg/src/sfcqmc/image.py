"""Float image buffer with binary PGM/PPM and CSV output.

Buffers store ``data[y, x, c]`` with row 0 at the bottom of the picture.
Files are written top row first, as the PNM formats require.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["ImageBuffer", "quantize", "read_pnm", "write_csv"]


def quantize(values) -> np.ndarray:
    """Map ``[0, 1]`` to 8 bits with round-half-up; values outside are clamped first."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Gray (1 channel) or RGB (3 channel) image with values clamped to ``[0, 1]``."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ValueError(f"expected shape (height, width[, 1|3]), got {np.shape(self.data)}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        data = np.clip(np.nan_to_num(data, nan=0.0), 0.0, 1.0)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def blank(cls, width: int, height: int, channels: int = 1, value: float = 0.0) -> "ImageBuffer":
        return cls(np.full((height, width, channels), float(value)))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def gray(self) -> np.ndarray:
        """``(height, width)`` view for single channel images."""
        if self.channels != 1:
            raise ValueError("image has more than one channel")
        return self.data[:, :, 0]

    def __eq__(self, other):
        return isinstance(other, ImageBuffer) and np.array_equal(self.data, other.data)

    __hash__ = None

    def to_pnm(self) -> bytes:
        """Binary P5 (gray) or P6 (RGB) bytes, maxval 255."""
        magic = b"P5" if self.channels == 1 else b"P6"
        header = magic + b"\n%d %d\n255\n" % (self.width, self.height)
        return header + quantize(self.data[::-1]).tobytes()

    def write_pnm(self, path) -> None:
        Path(path).write_bytes(self.to_pnm())

    def write_csv(self, path_or_file, name: str = "value") -> None:
        """One ``pixel_x,pixel_y,<name>`` row per pixel (per channel suffix for RGB)."""
        cols = [name] if self.channels == 1 else [f"{name}_{c}" for c in "rgb"]
        rows = (
            [x, y, *(repr(float(v)) for v in self.data[y, x])]
            for y in range(self.height)
            for x in range(self.width)
        )
        write_csv(path_or_file, ["pixel_x", "pixel_y", *cols], rows)


def read_pnm(source) -> ImageBuffer:
    """Parse binary P5/P6 bytes (or a file path) back into a buffer of ``k/255`` values."""
    raw = source if isinstance(source, (bytes, bytearray)) else Path(source).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        start = pos
        while not raw[pos : pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    pos += 1
    magic, width, height, maxval = fields[0], int(fields[1]), int(fields[2]), int(fields[3])
    if magic not in (b"P5", b"P6") or maxval != 255:
        raise ValueError("only binary P5/P6 with maxval 255 are supported")
    channels = 1 if magic == b"P5" else 3
    pixels = np.frombuffer(raw, dtype=np.uint8, count=width * height * channels, offset=pos)
    return ImageBuffer(pixels.reshape(height, width, channels)[::-1] / 255.0)


def write_csv(path_or_file, header, rows) -> None:
    """Write a header row and data rows with ``\\n`` line endings."""
    if isinstance(path_or_file, (str, Path)):
        with open(path_or_file, "w", newline="") as fh:
            write_csv(fh, header, rows)
        return
    writer = csv.writer(path_or_file, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()

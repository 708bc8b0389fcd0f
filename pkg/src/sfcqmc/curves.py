"""Space-filling curves on square pixel grids.

Four curves are supported: Morton (Z-order), Hilbert and Moore in base 2,
and Peano in base 3.  Each maps an index ``0 <= i < side**2`` to a pixel
``(x, y)`` and back.  Pixel coordinates have their origin in the bottom-left
corner, ``x`` grows to the right and ``y`` grows upwards.

All functions accept either Python integers or integer numpy arrays; array
inputs are processed element-wise and return arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "CapacityError",
    "CurveKind",
    "GridSpec",
    "ImageDims",
    "PixelCoord",
    "MAX_LEVEL",
    "fit_grid",
    "curve_point",
    "curve_index",
    "index_map",
    "curve_order",
    "in_image_rank",
    "rank_table",
    "neighborhood_segments",
]


class CapacityError(ValueError):
    """A grid or index range exceeds what the 64-bit index arithmetic supports."""


class CurveKind(str, enum.Enum):
    MORTON = "morton"
    HILBERT = "hilbert"
    MOORE = "moore"
    PEANO = "peano"

    @property
    def base(self) -> int:
        return 3 if self is CurveKind.PEANO else 2

    @classmethod
    def parse(cls, value: "CurveKind | str") -> "CurveKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown curve {value!r}; expected one of {names}") from None


# N = base**(2*level) must leave head room for N * spp in 64 bits.
MAX_LEVEL = {2: 16, 3: 10}


class PixelCoord(NamedTuple):
    x: int
    y: int


class ImageDims(NamedTuple):
    width: int
    height: int


@dataclass(frozen=True)
class GridSpec:
    """A curve of a given kind covering a ``side x side`` grid, ``side = base**level``."""

    kind: CurveKind
    level: int

    def __post_init__(self):
        kind = CurveKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if int(self.level) != self.level or self.level < 0:
            raise ValueError(f"level must be a non-negative integer, got {self.level!r}")
        object.__setattr__(self, "level", int(self.level))
        if self.level > MAX_LEVEL[kind.base]:
            raise CapacityError(
                f"level {self.level} exceeds the supported maximum "
                f"{MAX_LEVEL[kind.base]} for base {kind.base}"
            )

    @property
    def base(self) -> int:
        return self.kind.base

    @property
    def side(self) -> int:
        return self.base**self.level

    @property
    def length(self) -> int:
        return self.side * self.side


def _check_dims(dims) -> ImageDims:
    width, height = (int(v) for v in dims)
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    return ImageDims(width, height)


def fit_grid(kind: CurveKind | str, dims) -> GridSpec:
    """Smallest grid of the given curve kind that covers an image.

    The level is the smallest ``n`` with ``base**n >= max(width, height)``.
    """
    kind = CurveKind.parse(kind)
    width, height = _check_dims(dims)
    target = max(width, height)
    level, side = 0, 1
    while side < target:
        side *= kind.base
        level += 1
    if level > MAX_LEVEL[kind.base]:
        raise CapacityError(
            f"a {width}x{height} image needs level {level} of the {kind.value} curve, "
            f"more than the supported {MAX_LEVEL[kind.base]}"
        )
    return GridSpec(kind, level)


# ---------------------------------------------------------------- per-curve maps


def _morton_point(level, d):
    x = np.zeros_like(d)
    y = np.zeros_like(d)
    for k in range(level):
        x |= ((d >> (2 * k)) & 1) << k
        y |= ((d >> (2 * k + 1)) & 1) << k
    return x, y


def _morton_index(level, x, y):
    d = np.zeros_like(x)
    for k in range(level):
        d |= ((x >> k) & 1) << (2 * k)
        d |= ((y >> k) & 1) << (2 * k + 1)
    return d


def _hilbert_point(level, d):
    x = np.zeros_like(d)
    y = np.zeros_like(d)
    t = d.copy()
    s = 1
    for _ in range(level):
        rx = (t >> 1) & 1
        ry = (t ^ rx) & 1
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, s - 1 - x, x)
        y = np.where(flip, s - 1 - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        x = x + s * rx
        y = y + s * ry
        t = t >> 2
        s <<= 1
    return x, y


def _hilbert_index(level, x, y):
    n = 1 << level
    d = np.zeros_like(x)
    s = n >> 1
    while s > 0:
        rx = ((x & s) > 0).astype(x.dtype)
        ry = ((y & s) > 0).astype(x.dtype)
        d = d + s * s * ((3 * rx) ^ ry)
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, n - 1 - x, x)
        y = np.where(flip, n - 1 - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        s >>= 1
    return d


# The Moore curve is four Hilbert curves of half the side, visited in the
# quadrant order bottom-left, top-left, top-right, bottom-right.  The first
# quadrant starts at its bottom-right cell, so the loop closes between the
# last cell (h, 0) and the first cell (h - 1, 0).


def _moore_point(level, d):
    if level == 0:
        return np.zeros_like(d), np.zeros_like(d)
    h = 1 << (level - 1)
    quad = d // (h * h)
    hx, hy = _hilbert_point(level - 1, d % (h * h))
    x = np.where(quad < 2, h - 1 - hy, h + hy)
    y = np.select([quad == 0, quad == 1, quad == 2], [hx, hx + h, 2 * h - 1 - hx], h - 1 - hx)
    return x, y


def _moore_index(level, x, y):
    if level == 0:
        return np.zeros_like(x)
    h = 1 << (level - 1)
    left = x < h
    low = y < h
    quad = np.where(left, np.where(low, 0, 1), np.where(low, 3, 2))
    hy = np.where(left, h - 1 - x, x - h)
    hx = np.select([quad == 0, quad == 1, quad == 2], [y, y - h, 2 * h - 1 - y], h - 1 - y)
    return quad * h * h + _hilbert_index(level - 1, hx, hy)


# Peano: serpentine over the 3x3 cells column by column (up, down, up).  The
# sub-curve inside cell (cx, cy) is mirrored in x when cy is odd and in y
# when cx is odd; mirrors accumulate down the recursion.


def _peano_point(level, d):
    x = np.zeros_like(d)
    y = np.zeros_like(d)
    fx = np.zeros(d.shape, dtype=bool)
    fy = np.zeros(d.shape, dtype=bool)
    for t in range(level):
        digit = (d // 9 ** (level - 1 - t)) % 9
        cx = digit // 3
        r = digit % 3
        cy = np.where(cx % 2 == 0, r, 2 - r)
        x = 3 * x + np.where(fx, 2 - cx, cx)
        y = 3 * y + np.where(fy, 2 - cy, cy)
        fx = fx ^ (cy % 2 == 1)
        fy = fy ^ (cx % 2 == 1)
    return x, y


def _peano_index(level, x, y):
    d = np.zeros_like(x)
    fx = np.zeros(x.shape, dtype=bool)
    fy = np.zeros(x.shape, dtype=bool)
    for t in range(level):
        p = 3 ** (level - 1 - t)
        ax = (x // p) % 3
        ay = (y // p) % 3
        cx = np.where(fx, 2 - ax, ax)
        cy = np.where(fy, 2 - ay, ay)
        r = np.where(cx % 2 == 0, cy, 2 - cy)
        d = 9 * d + 3 * cx + r
        fx = fx ^ (cy % 2 == 1)
        fy = fy ^ (cx % 2 == 1)
    return d


_POINT = {
    CurveKind.MORTON: _morton_point,
    CurveKind.HILBERT: _hilbert_point,
    CurveKind.MOORE: _moore_point,
    CurveKind.PEANO: _peano_point,
}
_INDEX = {
    CurveKind.MORTON: _morton_index,
    CurveKind.HILBERT: _hilbert_index,
    CurveKind.MOORE: _moore_index,
    CurveKind.PEANO: _peano_index,
}


def _as_int_array(value, name):
    arr = np.asarray(value)
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(arr == np.floor(arr)):
            arr = arr.astype(np.int64)
        else:
            raise TypeError(f"{name} must be integer valued")
    return arr.astype(np.int64)


def curve_point(grid: GridSpec, index):
    """Pixel visited at position ``index`` along the curve.

    Returns a :class:`PixelCoord` for a scalar index, otherwise a pair of
    arrays ``(x, y)`` with the shape of ``index``.
    """
    d = _as_int_array(index, "index")
    if np.any(d < 0) or np.any(d >= grid.length):
        raise ValueError(f"curve index out of range [0, {grid.length})")
    x, y = _POINT[grid.kind](grid.level, np.atleast_1d(d))
    if d.ndim == 0:
        return PixelCoord(int(x[0]), int(y[0]))
    return x.reshape(d.shape), y.reshape(d.shape)


def curve_index(grid: GridSpec, x, y=None):
    """Position of pixel ``(x, y)`` along the curve; inverse of :func:`curve_point`.

    ``x`` may also be a ``(x, y)`` pair when ``y`` is omitted.
    """
    if y is None:
        x, y = x
    xa = _as_int_array(x, "x")
    ya = _as_int_array(y, "y")
    side = grid.side
    if np.any(xa < 0) or np.any(ya < 0) or np.any(xa >= side) or np.any(ya >= side):
        raise ValueError(f"pixel outside the {side}x{side} grid")
    xa, ya = np.broadcast_arrays(xa, ya)
    d = _INDEX[grid.kind](grid.level, np.atleast_1d(xa).copy(), np.atleast_1d(ya).copy())
    if xa.ndim == 0:
        return int(d[0])
    return d.reshape(xa.shape)


def index_map(grid: GridSpec) -> np.ndarray:
    """Curve index of every pixel as a ``(side, side)`` array indexed ``[y, x]``."""
    side = grid.side
    ys, xs = np.mgrid[0:side, 0:side]
    return curve_index(grid, xs.astype(np.int64), ys.astype(np.int64))


def curve_order(grid: GridSpec, dims=None) -> np.ndarray:
    """Pixels in curve order as an ``(n, 2)`` array of ``(x, y)``.

    With ``dims`` given, pixels outside the ``width x height`` image are
    dropped, so row ``k`` holds the pixel of in-image rank ``k``.
    """
    x, y = curve_point(grid, np.arange(grid.length, dtype=np.int64))
    if dims is not None:
        width, height = _check_dims(dims)
        keep = (x < width) & (y < height)
        x, y = x[keep], y[keep]
    return np.stack([x, y], axis=1)


def _overlap(lo, size, limit):
    return np.clip(np.minimum(lo + size, limit) - lo, 0, None)


def in_image_rank(grid: GridSpec, dims, x, y=None):
    """Number of in-image pixels strictly preceding ``(x, y)`` along the curve.

    Pixels of the grid outside the ``width x height`` image are skipped, so
    the ranks of the in-image pixels are exactly ``0 .. width*height - 1``.

    Every aligned block of ``s*s`` consecutive indices of these curves
    covers an aligned ``s x s`` square, so the count is accumulated level by
    level from the squares of the sibling blocks that precede the pixel's
    own block, clipped against the image rectangle.
    """
    if y is None:
        x, y = x
    width, height = _check_dims(dims)
    if width > grid.side or height > grid.side:
        raise ValueError(f"image {width}x{height} does not fit the {grid.side}x{grid.side} grid")
    xa = _as_int_array(x, "x")
    ya = _as_int_array(y, "y")
    if np.any(xa < 0) or np.any(ya < 0) or np.any(xa >= width) or np.any(ya >= height):
        raise ValueError(f"pixel outside the {width}x{height} image")
    xa, ya = np.broadcast_arrays(xa, ya)
    idx = np.atleast_1d(curve_index(grid, xa, ya))
    b2 = grid.base**2
    rank = np.zeros_like(idx)
    for t in range(grid.level):
        s = grid.base ** (grid.level - 1 - t)
        block = s * s
        digit = (idx // block) % b2
        parent = idx // (block * b2)
        for sibling in range(b2 - 1):
            before = sibling < digit
            if not np.any(before):
                continue
            start = (parent * b2 + sibling) * block
            sx, sy = curve_point(grid, start)
            sx = (sx // s) * s
            sy = (sy // s) * s
            area = _overlap(sx, s, width) * _overlap(sy, s, height)
            rank = rank + np.where(before, area, 0)
    if xa.ndim == 0:
        return int(rank[0])
    return rank.reshape(xa.shape)


def rank_table(grid: GridSpec, dims) -> np.ndarray:
    """In-image rank of every image pixel as a ``(height, width)`` array indexed ``[y, x]``."""
    width, height = _check_dims(dims)
    if width * height * 8 >= grid.length:
        order = curve_order(grid, (width, height))
        table = np.empty((height, width), dtype=np.int64)
        table[order[:, 1], order[:, 0]] = np.arange(len(order))
        return table
    ys, xs = np.mgrid[0:height, 0:width]
    return in_image_rank(grid, (width, height), xs.astype(np.int64), ys.astype(np.int64))


def neighborhood_segments(grid: GridSpec, x, y=None) -> int:
    """Number of curve segments entering the 3x3 neighborhood of a pixel.

    Counts maximal runs of consecutive curve indices among the pixels of the
    neighborhood, clipped to the grid.
    """
    if y is None:
        x, y = x
    x, y = int(x), int(y)
    side = grid.side
    if not (0 <= x < side and 0 <= y < side):
        raise ValueError(f"pixel outside the {side}x{side} grid")
    xs = [u for u in (x - 1, x, x + 1) if 0 <= u < side]
    ys = [v for v in (y - 1, y, y + 1) if 0 <= v < side]
    gx, gy = np.meshgrid(xs, ys)
    indices = np.sort(curve_index(grid, gx.ravel(), gy.ravel()))
    return 1 + int(np.count_nonzero(np.diff(indices) != 1))

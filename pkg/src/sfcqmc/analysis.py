"""Diagnostics for curve locality and sample uniformity.

* :func:`segment_stats` counts how many curve segments pass through the
  3x3 neighborhood of each pixel.
* :func:`diff_map` lists the index difference across every grid edge.
* :func:`dither_map` shows the first sample of each pixel as an image.
* :func:`star_discrepancy_2d` and :func:`star_discrepancy_1d` are exact
  star discrepancies; :func:`neighborhood_uniformity` applies the 1-D one
  to the samples gathered from a window of pixels.
"""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from sklearn.base import clone

from ._validation import check_image, check_positive_int
from .curves import GridSpec, index_map, rank_table
from .image import ImageBuffer
from .radical import RadicalInverseSpec, ScrambleSpec, radical_inverse

__all__ = [
    "EdgeDiffMap",
    "SegmentStats",
    "NeighborhoodUniformity",
    "dither_map",
    "diff_map",
    "segment_counts",
    "segment_stats",
    "star_discrepancy_2d",
    "star_discrepancy_1d",
    "neighborhood_uniformity",
    "pixel_rows",
]


def _base_specs(bases):
    specs = []
    for c, entry in enumerate(bases):
        if isinstance(entry, RadicalInverseSpec):
            specs.append(entry)
            continue
        if isinstance(entry, (tuple, list)):
            base, scramble = entry
        else:
            base, scramble = entry, None
        if scramble is None:
            scramble = ScrambleSpec()
        elif not isinstance(scramble, ScrambleSpec):
            scramble = ScrambleSpec.parse(scramble)
        specs.append(RadicalInverseSpec(int(base), scramble, c))
    return specs


def dither_map(grid: GridSpec, dims, bases, spp: int = 1) -> ImageBuffer:
    """Radical inverse of the first sample index of every pixel's block.

    ``bases`` holds one entry per channel: a base, a ``(base, scramble)``
    pair or a :class:`RadicalInverseSpec`.  One entry gives a gray image,
    three give RGB.
    """
    specs = _base_specs(bases)
    if len(specs) not in (1, 3):
        raise ValueError(f"dither maps need 1 or 3 bases, got {len(specs)}")
    spp = check_positive_int(spp, "spp")
    dims = check_image(dims)
    first = rank_table(grid, dims) * spp
    return ImageBuffer(np.stack([radical_inverse(spec, first) for spec in specs], axis=-1))


class EdgeDiffMap(NamedTuple):
    """Absolute curve-index differences across grid edges.

    ``horizontal[y, x]`` is the edge between ``(x, y)`` and ``(x + 1, y)``,
    ``vertical[y, x]`` the edge between ``(x, y)`` and ``(x, y + 1)``.
    """

    horizontal: np.ndarray
    vertical: np.ndarray

    @property
    def curve_edges(self) -> int:
        return int(np.count_nonzero(self.horizontal == 1) + np.count_nonzero(self.vertical == 1))

    def summary(self) -> Counter:
        """Multiset of the differences greater than one."""
        values = np.concatenate([self.horizontal.ravel(), self.vertical.ravel()])
        return Counter(int(v) for v in values[values > 1])

    def rows(self, skip_ones: bool = False):
        """``(x0, y0, x1, y1, diff)`` per edge; horizontal edges first, row-major."""
        out = []
        for arr, (dx, dy) in ((self.horizontal, (1, 0)), (self.vertical, (0, 1))):
            for y, x in zip(*np.nonzero(arr > (1 if skip_ones else 0))):
                out.append((int(x), int(y), int(x) + dx, int(y) + dy, int(arr[y, x])))
        return out


def diff_map(grid: GridSpec) -> EdgeDiffMap:
    idx = index_map(grid).astype(np.int64)
    return EdgeDiffMap(np.abs(np.diff(idx, axis=1)), np.abs(np.diff(idx, axis=0)))


class SegmentStats(NamedTuple):
    counts: np.ndarray  # [y, x]
    histogram: dict
    max: int


def segment_counts(grid: GridSpec) -> np.ndarray:
    """Per-pixel number of curve segments in the clipped 3x3 neighborhood, indexed ``[y, x]``."""
    idx = index_map(grid).astype(np.float64)
    padded = np.pad(idx, 1, constant_values=np.nan)
    win = sliding_window_view(padded, (3, 3)).reshape(idx.shape + (9,))
    win = np.sort(win, axis=-1)
    steps = np.diff(win, axis=-1)
    breaks = np.count_nonzero(np.isfinite(steps) & (steps != 1), axis=-1)
    return 1 + breaks


def segment_stats(grid: GridSpec) -> SegmentStats:
    counts = segment_counts(grid)
    values, freq = np.unique(counts, return_counts=True)
    return SegmentStats(counts, {int(v): int(f) for v, f in zip(values, freq)}, int(counts.max()))


def star_discrepancy_2d(points) -> float:
    """Exact star discrepancy of a 2-D point set in ``[0, 1)^2``.

    Evaluates the local discrepancy on all critical anchored boxes: open
    boxes with corners in ``(X + {1}) x (Y + {1})`` for the volume excess and
    closed boxes with corners in ``X x Y`` for the count excess.
    """
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {p.shape}")
    n = p.shape[0]
    if n == 0:
        raise ValueError("star discrepancy of an empty point set is undefined")
    if n > 4096:
        raise ValueError("at most 4096 points are supported")
    if np.any(p < 0) or np.any(p >= 1):
        raise ValueError("points must lie in [0, 1)^2")
    ux, ix = np.unique(p[:, 0], return_inverse=True)
    uy, iy = np.unique(p[:, 1], return_inverse=True)
    hist = np.zeros((ux.size + 1, uy.size + 1), dtype=np.int32)
    np.add.at(hist, (ix.ravel() + 1, iy.ravel() + 1), 1)
    counts = hist.cumsum(axis=0).cumsum(axis=1)
    # counts[i, j] = #{x <= ux[i-1], y <= uy[j-1]} = #{x < a_i, y < b_j} with a = (ux, 1)
    ax = np.append(ux, 1.0)
    by = np.append(uy, 1.0)
    open_gap = np.outer(ax, by) - counts / n
    closed_gap = counts[1:, 1:] / n - np.outer(ux, uy)
    return float(max(open_gap.max(), closed_gap.max()))


def star_discrepancy_1d(values) -> float:
    """Exact star discrepancy ``1/(2n) + max_i |x_(i) - (2i - 1)/(2n)|``."""
    x = np.sort(np.asarray(values, dtype=np.float64).ravel())
    n = x.size
    if n == 0:
        raise ValueError("star discrepancy of an empty point set is undefined")
    target = (2 * np.arange(1, n + 1) - 1) / (2 * n)
    return float(1 / (2 * n) + np.max(np.abs(x - target)))


class NeighborhoodUniformity(NamedTuple):
    per_pixel: np.ndarray  # [y, x]
    mean: float
    max: float


def neighborhood_uniformity(strategy, dims, spp: int = 1, window: int = 3, dim: int = 0):
    """1-D star discrepancy of one sample dimension gathered over a window of pixels.

    ``strategy`` is an unfitted sampler; samplers with an ``spp`` parameter
    are set to ``spp``.  The window is clipped at the image border.
    """
    window = check_positive_int(window, "window")
    if window % 2 == 0:
        raise ValueError(f"window must be odd, got {window}")
    spp = check_positive_int(spp, "spp")
    dims = check_image(dims)
    est = clone(strategy)
    if "spp" in est.get_params(deep=False):
        est.set_params(spp=spp)
    est.fit(dims)
    w, h = dims
    ys, xs, ss = np.meshgrid(np.arange(h), np.arange(w), np.arange(spp), indexing="ij")
    req = np.stack([xs.ravel(), ys.ravel(), ss.ravel()], axis=1)
    values = est.transform(req)[:, dim].reshape(h, w, spp)
    r = window // 2
    padded = np.pad(values, ((r, r), (r, r), (0, 0)), constant_values=np.nan)
    win = sliding_window_view(padded, (window, window), axis=(0, 1)).reshape(h, w, -1)
    win = np.sort(win, axis=-1)
    k = np.count_nonzero(np.isfinite(win), axis=-1)[..., None]
    i = np.arange(1, win.shape[-1] + 1)
    gap = np.abs(win - (2 * i - 1) / (2 * k))
    disc = 1 / (2 * k[..., 0]) + np.nanmax(np.where(i <= k, gap, np.nan), axis=-1)
    return NeighborhoodUniformity(disc, float(disc.mean()), float(disc.max()))


def pixel_rows(values: np.ndarray):
    """``(x, y, value)`` rows of a ``[y, x]`` array, row-major from the bottom row."""
    h, w = values.shape
    for y in range(h):
        for x in range(w):
            v = values[y, x]
            yield x, y, (int(v) if np.issubdtype(values.dtype, np.integer) else repr(float(v)))

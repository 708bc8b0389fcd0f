"""Small renderer over analytic integrands for comparing pixel samplers.

Each integrand maps a pixel ``(x, y)`` and a point ``u`` of the unit cube
to a value in ``[0, 1]`` and has an exact per-pixel mean, so errors can be
measured without a reference render.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from sklearn.base import clone

from ._validation import check_image, check_positive_int
from .image import ImageBuffer, csv_text, write_csv

__all__ = [
    "TestIntegrand",
    "INTEGRANDS",
    "get_integrand",
    "disk_coverage",
    "ErrorReport",
    "thread_count",
    "render",
    "reference",
    "compare",
    "TILE",
    "REPORT_HEADER",
    "write_report",
    "report_row",
    "report_text",
]

TILE = 8
REPORT_HEADER = ("strategy", "integrand", "spp", "rmse", "splotchiness", "max_abs")


@dataclass(frozen=True)
class TestIntegrand:
    """Per-pixel integrand ``g(x, y, u, dims)`` on ``[0, 1)^dimension``.

    ``g`` is vectorized over rows of ``u``; ``exact(dims)`` returns the
    ``(height, width)`` array of per-pixel integrals when known.
    """

    __test__ = False  # not a pytest class

    name: str
    dimension: int
    g: Callable
    exact: Optional[Callable] = None


def _constant(value=0.5):
    def g(x, y, u, dims):
        return np.full(len(x), value)

    def exact(dims):
        return np.full((dims.height, dims.width), value)

    return TestIntegrand("constant", 1, g, exact)


def _gradient_scale(x, y, dims):
    # smooth, slowly varying weight in [0.2, 1]
    fx = (np.asarray(x) + 0.5) / dims.width
    fy = (np.asarray(y) + 0.5) / dims.height
    return 0.2 + 0.8 * (0.5 + 0.5 * np.sin(math.pi * (fx + 0.5 * fy))) * (0.5 + 0.5 * fx)


def _gradient():
    def g(x, y, u, dims):
        return _gradient_scale(x, y, dims) * u[:, 0] * u[:, 1]

    def exact(dims):
        ys, xs = np.mgrid[0 : dims.height, 0 : dims.width]
        return _gradient_scale(xs, ys, dims) / 4.0

    return TestIntegrand("gradient", 2, g, exact)


def _disk_geometry(dims):
    return dims.width / 2.0, dims.height / 2.0, 0.4 * min(dims.width, dims.height)


def _chord_antiderivative(t, r):
    # integral of sqrt(r^2 - t^2)
    t = min(max(t, -r), r)
    return 0.5 * (t * math.sqrt(max(r * r - t * t, 0.0)) + r * r * math.asin(t / r))


def disk_coverage(x0, x1, y0, y1, r) -> float:
    """Exact area of the rectangle ``[x0, x1] x [y0, y1]`` inside the disk of radius ``r`` at the origin."""
    cuts = {x0, x1}
    for c in (r, math.sqrt(max(r * r - y0 * y0, 0.0)), math.sqrt(max(r * r - y1 * y1, 0.0))):
        for v in (c, -c):
            if x0 < v < x1:
                cuts.add(v)
    cuts = sorted(cuts)
    area = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        if abs(mid) >= r:
            continue
        h = math.sqrt(r * r - mid * mid)
        hint = _chord_antiderivative(b, r) - _chord_antiderivative(a, r)
        top = hint if y1 > h else y1 * (b - a)
        bottom = -hint if y0 < -h else y0 * (b - a)
        upper_at_mid = min(y1, h)
        lower_at_mid = max(y0, -h)
        if upper_at_mid > lower_at_mid:
            area += top - bottom
    return area


def _disk():
    def g(x, y, u, dims):
        cx, cy, r = _disk_geometry(dims)
        px = x + u[:, 0] - cx
        py = y + u[:, 1] - cy
        return (px * px + py * py < r * r).astype(np.float64)

    def exact(dims):
        cx, cy, r = _disk_geometry(dims)
        out = np.empty((dims.height, dims.width))
        for y in range(dims.height):
            for x in range(dims.width):
                out[y, x] = disk_coverage(x - cx, x + 1 - cx, y - cy, y + 1 - cy, r)
        return out

    return TestIntegrand("disk", 2, g, exact)


def _penumbra(x, y, dims):
    return 2.0 * (np.asarray(x) + np.asarray(y) + 1.0) / (dims.width + dims.height)


def _triangle_area(t):
    # area of {a + b < t} in the unit square
    t = np.asarray(t, dtype=np.float64)
    return np.where(t <= 1.0, 0.5 * t * t, 1.0 - 0.5 * (2.0 - t) ** 2)


def _soft_shadow():
    def g(x, y, u, dims):
        visible = (u[:, 0] + u[:, 1] < _penumbra(x, y, dims)).astype(np.float64)
        return visible * 0.5 * (u[:, 2] + u[:, 3])

    def exact(dims):
        ys, xs = np.mgrid[0 : dims.height, 0 : dims.width]
        return 0.5 * _triangle_area(_penumbra(xs, ys, dims))

    return TestIntegrand("soft_shadow", 4, g, exact)


INTEGRANDS = {
    "constant": _constant(),
    "gradient": _gradient(),
    "disk": _disk(),
    "soft_shadow": _soft_shadow(),
}


def get_integrand(name) -> TestIntegrand:
    if isinstance(name, TestIntegrand):
        return name
    try:
        return INTEGRANDS[name]
    except KeyError:
        raise ValueError(f"unknown integrand {name!r}; expected one of {', '.join(INTEGRANDS)}") from None


def thread_count(threads=None) -> int:
    """Worker count: ``threads`` if given, else ``SFCQMC_THREADS``, else the CPU count."""
    if threads is None:
        env = os.environ.get("SFCQMC_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"SFCQMC_THREADS must be an integer, got {env!r}") from None
        else:
            threads = os.cpu_count() or 1
    return max(1, int(threads))


_BATCH = 1 << 16


def render(strategy, integrand, dims, spp: int, threads=None) -> ImageBuffer:
    """Mean of ``spp`` samples per pixel, accumulated in ascending sample order.

    ``strategy`` is cloned and fitted to ``dims``; a sampler with an ``spp``
    parameter is set to the render budget.  Pixels are split into fixed
    chunks independent of the thread count, so output does not depend on it.
    """
    integrand = get_integrand(integrand)
    dims = check_image(dims)
    spp = check_positive_int(spp, "spp")
    est = clone(strategy)
    if "spp" in est.get_params(deep=False):
        est.set_params(spp=spp)
    est.fit(dims)
    d = integrand.dimension
    if est.n_integrand_dims_ < d:
        raise ValueError(
            f"{type(est).__name__} supplies {est.n_integrand_dims_} integrand dimensions, "
            f"{integrand.name} needs {d}"
        )
    w, h = dims
    n_pix = w * h
    ys, xs = np.divmod(np.arange(n_pix, dtype=np.int64), w)
    chunk = max(1, _BATCH // spp)
    out = np.empty(n_pix)

    def work(lo):
        hi = min(lo + chunk, n_pix)
        x = np.repeat(xs[lo:hi], spp)
        y = np.repeat(ys[lo:hi], spp)
        s = np.tile(np.arange(spp, dtype=np.int64), hi - lo)
        u = est.transform(np.stack([x, y, s], axis=1))[:, :d]
        vals = integrand.g(x, y, u, dims).reshape(hi - lo, spp)
        acc = np.zeros(hi - lo)
        for k in range(spp):
            acc += vals[:, k]
        out[lo:hi] = acc / spp

    starts = range(0, n_pix, chunk)
    workers = min(thread_count(threads), len(starts))
    if workers <= 1:
        for lo in starts:
            work(lo)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, starts))
    return ImageBuffer(out.reshape(h, w))


def reference(integrand, dims, spp: int = 1 << 14, threads=None) -> ImageBuffer:
    """Exact per-pixel integrals, or a fine render when no closed form exists."""
    integrand = get_integrand(integrand)
    dims = check_image(dims)
    if integrand.exact is not None:
        return ImageBuffer(integrand.exact(dims))
    from .strategies import HilbertBlocks

    return render(HilbertBlocks(n_dims=max(integrand.dimension, 2)), integrand, dims, spp, threads)


class ErrorReport(NamedTuple):
    rmse: float
    tile_splotchiness: float
    max_abs: float


def compare(image, ref, tile: int = TILE) -> ErrorReport:
    """RMSE, variance of ``tile x tile`` mean signed errors (border tiles clipped), max error."""
    a = image.data if isinstance(image, ImageBuffer) else np.asarray(image, dtype=np.float64)
    b = ref.data if isinstance(ref, ImageBuffer) else np.asarray(ref, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    err = a - b
    if err.ndim == 2:
        err = err[:, :, None]
    h, w = err.shape[:2]
    means = [
        err[ty : ty + tile, tx : tx + tile].mean() for ty in range(0, h, tile) for tx in range(0, w, tile)
    ]
    return ErrorReport(
        float(np.sqrt(np.mean(err * err))),
        float(np.var(means)),
        float(np.max(np.abs(err))),
    )


def report_row(strategy_name: str, integrand_name: str, spp: int, report: ErrorReport):
    return (strategy_name, integrand_name, spp, repr(report.rmse), repr(report.tile_splotchiness), repr(report.max_abs))


def write_report(path_or_file, rows) -> None:
    write_csv(path_or_file, REPORT_HEADER, rows)


def report_text(rows) -> str:
    return csv_text(REPORT_HEADER, rows)


"""Pixel samplers: which point of which sequence goes to which pixel and sample.

Every sampler follows the scikit-learn estimator conventions.  Constructor
arguments are hyper-parameters (``get_params``/``set_params``/``clone`` work
as usual, including the nested ``inner`` sampler of
:class:`RandomizedPasses`).  ``fit`` takes the image to be rendered, either
an array of shape ``(height, width[, channels])`` or an :class:`ImageDims`,
and precomputes the per-pixel tables.  ``transform`` maps an ``(n, 3)``
integer array of requests ``(x, y, s)`` to the ``(n, d)`` points handed to
the integrand, and ``sample_index`` to the global sequence indices.

The first two point coordinates are always the sample position inside the
pixel.  For :class:`ImagePlaneCRT` they are the offsets left over after the
first two Halton components have selected the pixel; for the other samplers
they are simply the first two coordinates of the sequence.

>>> from sfcqmc import HilbertBlocks, ImageDims
>>> sampler = HilbertBlocks(spp=4).fit(ImageDims(8, 8))
>>> int(sampler.sample_index([[0, 0, 3]])[0])
3
"""

from __future__ import annotations

import threading
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from ._validation import check_image, check_positive_int, check_requests
from .curves import CapacityError, curve_index, fit_grid, rank_table
from .radical import PRIMES, ScrambleSpec, leading_digit_residue, mix64, partition_label
from .sequences import HaltonSpec, LatticeSpec, cranley_patterson, halton_point, lattice_point

__all__ = [
    "SampleRequest",
    "HilbertBlocks",
    "Partitioned",
    "ShiftedLattice",
    "ImagePlaneCRT",
    "DoublingSegments",
    "RandomizedPasses",
    "assign_hilbert_blocks",
    "assign_partitioned",
    "assign_shifted_lattice",
    "assign_image_plane_crt",
    "assign_doubling",
    "randomize_pass",
    "pass_seed",
    "extended_euclid",
    "crt_pair",
    "PRESETS",
    "make_strategy",
]

_INT63 = 1 << 63


class SampleRequest(NamedTuple):
    x: int
    y: int
    s: int


def _scramble(value) -> ScrambleSpec:
    if isinstance(value, ScrambleSpec):
        return value
    return ScrambleSpec.parse(value if value is not None else "none")


def _check_capacity(s, stride, what):
    if np.any(s > (_INT63 - 1) // max(stride, 1) - 1):
        raise CapacityError(f"{what}: sample number overflows the 64-bit index range")


class _Sampler(BaseEstimator):
    """Shared fit/transform plumbing; subclasses fill in the index and point maps."""

    def fit(self, X, y=None):
        self.dims_ = check_image(X)
        self._fit(self.dims_)
        return self

    def sample_index(self, X):
        check_is_fitted(self, "dims_")
        x, y, s = check_requests(X, self.dims_)
        return self._indices(x, y, s)

    def transform(self, X):
        check_is_fitted(self, "dims_")
        x, y, s = check_requests(X, self.dims_)
        return self._points(x, y, s)

    def assign(self, x, y=None, s=None):
        """Scalar convenience: ``(global index, point)`` for one request."""
        if y is None:
            x, y, s = x
        req = np.array([[x, y, s]], dtype=np.int64)
        return int(self.sample_index(req)[0]), self.transform(req)[0]

    @property
    def n_integrand_dims_(self) -> int:
        check_is_fitted(self, "dims_")
        return int(self.n_dims)

    def _points(self, x, y, s):
        return halton_point(self.halton_, self._indices(x, y, s))


class HilbertBlocks(_Sampler):
    """Fixed budget of ``spp`` samples per pixel taken as contiguous blocks along the curve.

    The pixel of in-image rank ``j`` receives sequence indices
    ``j*spp .. j*spp + spp - 1``; pixels of the curve grid outside the
    image consume no samples.
    """

    def __init__(self, curve="hilbert", spp=1, n_dims=4, scramble="faure"):
        self.curve = curve
        self.spp = spp
        self.n_dims = n_dims
        self.scramble = scramble

    def _fit(self, dims):
        self.spp_ = check_positive_int(self.spp, "spp")
        self.grid_ = fit_grid(self.curve, dims)
        self.halton_ = HaltonSpec(check_positive_int(self.n_dims, "n_dims"), _scramble(self.scramble))
        self.ranks_ = rank_table(self.grid_, dims)
        _check_capacity(np.array([self.spp_]), dims.width * dims.height, "HilbertBlocks")

    def _indices(self, x, y, s):
        if np.any(s >= self.spp_):
            raise ValueError(f"sample number must be below spp={self.spp_}")
        return self.ranks_[y, x] * self.spp_ + s


class Partitioned(_Sampler):
    """Progressive sampler leapfrogging one sequence with the curve length as stride.

    The pixel with curve index ``j`` gets indices ``s*N + j`` (``N`` the
    number of grid cells), or ``s*N + inv(j)`` with ``use_inverse_offset``,
    where ``inv`` reverses the base-``b`` digits so that every index of the
    pixel satisfies ``floor(N * phi_b(i)) == j``.  The radical inverse in
    the curve's base partitions the sequence and is left out of the points.
    Out-of-image cells keep their indices and are never evaluated.
    """

    def __init__(self, curve="hilbert", n_dims=4, scramble="faure", use_inverse_offset=False):
        self.curve = curve
        self.n_dims = n_dims
        self.scramble = scramble
        self.use_inverse_offset = use_inverse_offset

    def _fit(self, dims):
        self.grid_ = fit_grid(self.curve, dims)
        n_dims = check_positive_int(self.n_dims, "n_dims")
        base = self.grid_.base
        self.partition_dim_ = PRIMES.index(base)
        self.halton_ = HaltonSpec(n_dims + 1, _scramble(self.scramble))
        self.kept_dims_ = np.array([k for k in range(n_dims + 1) if k != self.partition_dim_])
        ys, xs = np.mgrid[0 : dims.height, 0 : dims.width]
        j = curve_index(self.grid_, xs.astype(np.int64), ys.astype(np.int64))
        if self.use_inverse_offset:
            j = partition_label(base, 2 * self.grid_.level, j)
        self.offsets_ = j
        self.stride_ = self.grid_.length

    def _indices(self, x, y, s):
        _check_capacity(s, self.stride_, "Partitioned")
        return s * self.stride_ + self.offsets_[y, x]

    def _points(self, x, y, s):
        return halton_point(self.halton_, self._indices(x, y, s))[:, self.kept_dims_]


class ShiftedLattice(_Sampler):
    """One lattice sequence for every pixel, toroidally shifted per pixel.

    The shift of a pixel is the Halton point of its in-image rank along the
    curve; sample ``s`` is lattice point ``s`` plus that shift, modulo one.
    ``sample_index`` reports the lattice index ``s``.
    """

    def __init__(self, curve="hilbert", n_dims=4, scramble="faure", generating_vector=None):
        self.curve = curve
        self.n_dims = n_dims
        self.scramble = scramble
        self.generating_vector = generating_vector

    def _fit(self, dims):
        self.grid_ = fit_grid(self.curve, dims)
        n_dims = check_positive_int(self.n_dims, "n_dims")
        z = None if self.generating_vector is None else tuple(self.generating_vector)
        self.lattice_ = LatticeSpec(n_dims, z)
        self.halton_ = HaltonSpec(n_dims, _scramble(self.scramble))
        self.ranks_ = rank_table(self.grid_, dims)
        self.shifts_ = halton_point(self.halton_, self.ranks_)

    def _indices(self, x, y, s):
        return s.copy()

    def _points(self, x, y, s):
        return cranley_patterson(lattice_point(self.lattice_, s), self.shifts_[y, x])


def extended_euclid(a: int, b: int):
    """``(g, u, v)`` with ``a*u + b*v == g == gcd(a, b)``, checked against signed 64-bit range."""
    old_r, r = int(a), int(b)
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
        if max(abs(old_u), abs(old_v), abs(u), abs(v)) >= _INT63:
            raise CapacityError("extended Euclid left the signed 64-bit range")
    return old_r, old_u, old_v


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The ``i < m1*m2`` with ``i = r1 (mod m1)`` and ``i = r2 (mod m2)`` for coprime moduli."""
    g, u, _ = extended_euclid(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    t = ((r2 - r1) * u) % m2
    return r1 + m1 * t


class ImagePlaneCRT(_Sampler):
    """Baseline: the first two Halton components select the pixel.

    The image is covered by ``2**m x 3**n`` cells.  Sample ``s`` of cell
    ``(x, y)`` is Halton index ``s*2**m*3**n + i0``, where ``i0`` solves
    ``floor(2**m*phi_2(i0)) = x`` and ``floor(3**n*phi_3(i0)) = y`` through
    the Chinese remainder theorem.  The fractional remainders of the two
    scaled components are the offsets inside the pixel.
    """

    MAX_POW2 = 31
    MAX_POW3 = 19

    def __init__(self, n_dims=4, scramble="faure"):
        self.n_dims = n_dims
        self.scramble = scramble

    def _fit(self, dims):
        n_dims = check_positive_int(self.n_dims, "n_dims", minimum=2)
        self.halton_ = HaltonSpec(n_dims, _scramble(self.scramble))
        m = max(0, (dims.width - 1).bit_length())
        n = 0
        while 3**n < dims.height:
            n += 1
        if m > self.MAX_POW2 or n > self.MAX_POW3:
            raise CapacityError(f"a {dims.width}x{dims.height} image exceeds the 2^31 x 3^19 cell limit")
        self.pow2_, self.pow3_ = m, n
        self.cells_ = (1 << m, 3**n)
        self.stride_ = (1 << m) * 3**n
        r2 = np.asarray(leading_digit_residue(self.halton_.component(0), np.arange(dims.width), m))
        r3 = np.asarray(leading_digit_residue(self.halton_.component(1), np.arange(dims.height), n))
        m2, m3 = 1 << m, 3**n
        g, u, _ = extended_euclid(m2, m3)
        u %= m3
        # (3**n)**2 < 2**63 for n <= 19, so the products below stay in int64
        t = ((r3[:, None] - r2[None, :]) % m3) * u % m3
        self.offsets_ = r2[None, :] + m2 * t

    def _indices(self, x, y, s):
        _check_capacity(s, self.stride_, "ImagePlaneCRT")
        return s * self.stride_ + self.offsets_[y, x]

    def _points(self, x, y, s):
        p = halton_point(self.halton_, self._indices(x, y, s))
        sx, sy = self.cells_
        p[:, 0] = p[:, 0] * sx - x
        p[:, 1] = p[:, 1] * sy - y
        p[:, :2] = np.clip(p[:, :2], 0.0, np.nextafter(1.0, 0.0))
        return p


class DoublingSegments(_Sampler):
    """Progressive passes doubling the per-pixel budget, consuming the sequence in order.

    Pass ``t`` hands ``2**t`` consecutive indices to each pixel in curve
    order, so sample ``s`` of the pixel of rank ``j`` is index
    ``(2**t - 1)*W*H + j*2**t + (s - 2**t + 1)`` with ``t = floor(log2(s + 1))``.
    Kept to show how power-of-two strides correlate with the curve.
    """

    def __init__(self, curve="hilbert", n_dims=4, scramble="faure"):
        self.curve = curve
        self.n_dims = n_dims
        self.scramble = scramble

    def _fit(self, dims):
        self.grid_ = fit_grid(self.curve, dims)
        self.halton_ = HaltonSpec(check_positive_int(self.n_dims, "n_dims"), _scramble(self.scramble))
        self.ranks_ = rank_table(self.grid_, dims)
        self.pixels_ = dims.width * dims.height

    def _indices(self, x, y, s):
        if np.any(s >= 1 << 40):
            raise CapacityError("DoublingSegments: sample number too large")
        t = np.floor(np.log2(s + 1.0)).astype(np.int64)
        t = np.where((1 << (t + 1)) <= s + 1, t + 1, t)
        t = np.where((1 << t) > s + 1, t - 1, t)
        block = np.left_shift(1, t)
        return (block - 1) * self.pixels_ + self.ranks_[y, x] * block + (s - block + 1)


def pass_seed(seed: int, pass_number: int) -> int:
    """Scramble seed of one randomized pass; pass 0 of seed 0 maps to 0 (no randomization)."""
    if seed == 0 and pass_number == 0:
        return 0
    return mix64(mix64(int(seed) ^ 0x5851F42D4C957F2D) ^ (int(pass_number) + 1))


def randomize_pass(inner, pass_number: int, seed: int = 0, mode: str = "owen"):
    """Unfitted copy of ``inner`` whose sequence is scrambled for one pass.

    Pass 0 with seed 0 returns an unchanged copy.
    """
    if mode not in ("owen", "digit"):
        raise ValueError(f"randomization mode must be 'owen' or 'digit', got {mode!r}")
    out = clone(inner)
    derived = pass_seed(seed, pass_number)
    if derived == 0:
        return out
    return out.set_params(scramble=ScrambleSpec(mode, derived))


class RandomizedPasses(_Sampler):
    """Accumulate passes of an inner sampler, each over a freshly scrambled sequence.

    Sample ``s`` belongs to pass ``s // samples_per_pass`` and is sample
    ``s % samples_per_pass`` of that pass.  An inner sampler with an ``spp``
    parameter renders ``samples_per_pass`` samples per pass.
    """

    def __init__(self, inner=None, samples_per_pass=1, seed=0, mode="owen"):
        self.inner = inner
        self.samples_per_pass = samples_per_pass
        self.seed = seed
        self.mode = mode

    def _fit(self, dims):
        self.samples_per_pass_ = check_positive_int(self.samples_per_pass, "samples_per_pass")
        inner = self.inner if self.inner is not None else HilbertBlocks()
        if "spp" in inner.get_params(deep=False):
            inner = clone(inner).set_params(spp=self.samples_per_pass_)
        self.inner_ = inner
        self._passes = {}
        self._lock = threading.Lock()
        self.first_pass_ = self._pass(0)

    def _pass(self, p):
        with self._lock:
            fitted = self._passes.get(p)
            if fitted is None:
                fitted = randomize_pass(self.inner_, p, self.seed, self.mode).fit(self.dims_)
                self._passes[p] = fitted
            return fitted

    @property
    def n_integrand_dims_(self) -> int:
        check_is_fitted(self, "dims_")
        return self.first_pass_.n_integrand_dims_

    def _dispatch(self, x, y, s, method):
        passes = s // self.samples_per_pass_
        within = s % self.samples_per_pass_
        out = None
        for p in np.unique(passes):
            sel = passes == p
            req = np.stack([x[sel], y[sel], within[sel]], axis=1)
            res = getattr(self._pass(int(p)), method)(req)
            if out is None:
                out = np.empty((len(s),) + res.shape[1:], dtype=res.dtype)
            out[sel] = res
        return out

    def _indices(self, x, y, s):
        return self._dispatch(x, y, s, "sample_index")

    def _points(self, x, y, s):
        return self._dispatch(x, y, s, "transform")


def _request(req):
    x, y, s = req
    return np.array([[x, y, s]], dtype=np.int64)


def _assign(kind, strategy, req):
    if not isinstance(strategy, kind):
        raise TypeError(f"expected a fitted {kind.__name__}, got {type(strategy).__name__}")
    X = _request(req)
    return int(strategy.sample_index(X)[0]), strategy.transform(X)[0]


def assign_hilbert_blocks(strategy: HilbertBlocks, req):
    return _assign(HilbertBlocks, strategy, req)


def assign_partitioned(strategy: Partitioned, req):
    return _assign(Partitioned, strategy, req)


def assign_shifted_lattice(strategy: ShiftedLattice, req):
    return _assign(ShiftedLattice, strategy, req)[1]


def assign_image_plane_crt(strategy: ImagePlaneCRT, req):
    return _assign(ImagePlaneCRT, strategy, req)


def assign_doubling(strategy: DoublingSegments, req):
    return _assign(DoublingSegments, strategy, req)


PRESETS = {
    "baseline-crt": lambda **kw: ImagePlaneCRT(**_only(kw, "n_dims", "scramble")),
    "hilbert-blocks": lambda **kw: HilbertBlocks(**_only(kw, "curve", "spp", "n_dims", "scramble")),
    "shifted-lattice": lambda **kw: ShiftedLattice(
        **_only(kw, "curve", "n_dims", "scramble", "generating_vector")
    ),
    "partitioned": lambda **kw: Partitioned(**_only(kw, "curve", "n_dims", "scramble")),
    "partitioned-inverse": lambda **kw: Partitioned(
        use_inverse_offset=True, **_only(kw, "curve", "n_dims", "scramble")
    ),
    "doubling": lambda **kw: DoublingSegments(**_only(kw, "curve", "n_dims", "scramble")),
}

DETERMINISTIC_PRESETS = tuple(PRESETS)


def _only(kw, *names):
    return {k: v for k, v in kw.items() if k in names and v is not None}


def make_strategy(name: str, *, seed: int = 0, **params):
    """Build a sampler from a preset name; ``randomized:<inner>`` wraps any other preset.

    Unknown keyword parameters for the chosen preset are ignored, so one
    set of command line options can serve every preset.
    """
    if name.startswith("randomized:"):
        inner = make_strategy(name.split(":", 1)[1], **params)
        spp = params.get("samples_per_pass") or 1
        return RandomizedPasses(inner, samples_per_pass=spp, seed=seed, mode=params.get("mode") or "owen")
    try:
        factory = PRESETS[name]
    except KeyError:
        names = ", ".join(list(PRESETS) + ["randomized:<name>"])
        raise ValueError(f"unknown strategy {name!r}; expected one of {names}") from None
    return factory(**params)


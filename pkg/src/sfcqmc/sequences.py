"""Multi-dimensional low discrepancy sequences and Cranley-Patterson rotation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .radical import IDENTITY, PRIMES, RadicalInverseSpec, ScrambleSpec, radical_inverse

__all__ = [
    "MAX_HALTON_DIMENSIONS",
    "HaltonSpec",
    "LatticeSpec",
    "halton_point",
    "lattice_point",
    "cranley_patterson",
    "bit_reverse32",
    "load_generating_vector",
    "spectral_score",
    "search_generating_vector",
]

MAX_HALTON_DIMENSIONS = len(PRIMES)


@dataclass(frozen=True)
class HaltonSpec:
    """Halton sequence over the first ``dimensions`` primes.

    ``scramble`` is one :class:`ScrambleSpec` for every dimension or a
    sequence with one entry per dimension.  Seeded scrambles are
    decorrelated across dimensions by using the dimension as stream.
    """

    dimensions: int
    scramble: ScrambleSpec | Sequence[ScrambleSpec] = IDENTITY
    _radicals: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = int(self.dimensions)
        if not 1 <= d <= MAX_HALTON_DIMENSIONS:
            raise ValueError(f"Halton dimensions must be in [1, {MAX_HALTON_DIMENSIONS}], got {d}")
        object.__setattr__(self, "dimensions", d)
        if isinstance(self.scramble, (ScrambleSpec, str)):
            s = self.scramble if isinstance(self.scramble, ScrambleSpec) else ScrambleSpec.parse(self.scramble)
            scrambles = (s,) * d
        else:
            scrambles = tuple(s if isinstance(s, ScrambleSpec) else ScrambleSpec.parse(s) for s in self.scramble)
            if len(scrambles) != d:
                raise ValueError(f"expected {d} scrambles, got {len(scrambles)}")
        object.__setattr__(self, "scramble", scrambles)
        object.__setattr__(
            self, "_radicals", tuple(RadicalInverseSpec(PRIMES[k], scrambles[k], k) for k in range(d))
        )

    @property
    def bases(self) -> tuple:
        return PRIMES[: self.dimensions]

    def component(self, k: int) -> RadicalInverseSpec:
        return self._radicals[k]

    def with_scrambles(self, scrambles) -> "HaltonSpec":
        return HaltonSpec(self.dimensions, scrambles)


def halton_point(spec: HaltonSpec, i):
    """Point ``i`` of the Halton sequence; ``(d,)`` for a scalar, ``(n, d)`` for an array."""
    idx = np.asarray(i)
    flat = np.atleast_1d(idx)
    out = np.empty((flat.size, spec.dimensions))
    for k, rad in enumerate(spec._radicals):
        out[:, k] = radical_inverse(rad, flat.ravel())
    if idx.ndim == 0:
        return out[0]
    return out.reshape(idx.shape + (spec.dimensions,))


def bit_reverse32(i):
    """Reverse the low 32 bits of ``i`` (scalar or array)."""
    v = np.asarray(i).astype(np.uint64) & np.uint64(0xFFFFFFFF)
    v = ((v >> np.uint64(1)) & np.uint64(0x55555555)) | ((v & np.uint64(0x55555555)) << np.uint64(1))
    v = ((v >> np.uint64(2)) & np.uint64(0x33333333)) | ((v & np.uint64(0x33333333)) << np.uint64(2))
    v = ((v >> np.uint64(4)) & np.uint64(0x0F0F0F0F)) | ((v & np.uint64(0x0F0F0F0F)) << np.uint64(4))
    v = ((v >> np.uint64(8)) & np.uint64(0x00FF00FF)) | ((v & np.uint64(0x00FF00FF)) << np.uint64(8))
    v = ((v >> np.uint64(16)) & np.uint64(0x0000FFFF)) | ((v & np.uint64(0x0000FFFF)) << np.uint64(16))
    return v & np.uint64(0xFFFFFFFF)


def load_generating_vector(path: str | Path | None = None) -> tuple:
    """Read a generating vector: one unsigned integer per line, line ``k`` is ``z[k]``."""
    if path is None:
        text = resources.files("sfcqmc").joinpath("data/lattice_vector.txt").read_text()
    else:
        text = Path(path).read_text()
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            value = int(line)
        except ValueError:
            raise ValueError(f"line {lineno}: expected an unsigned integer, got {line!r}") from None
        if not 0 <= value < 1 << 32:
            raise ValueError(f"line {lineno}: {value} is not a 32-bit unsigned integer")
        values.append(value)
    if not values:
        raise ValueError("generating vector file is empty")
    return tuple(values)


@dataclass(frozen=True)
class LatticeSpec:
    """Extensible rank-1 lattice sequence ``frac(phi_2(i) * z)`` in 32-bit fixed point.

    Without an explicit ``generating_vector`` the first ``dimensions``
    entries of the shipped vector are used.
    """

    dimensions: int
    generating_vector: tuple | None = None

    def __post_init__(self):
        d = int(self.dimensions)
        if d < 1:
            raise ValueError(f"lattice dimensions must be positive, got {d}")
        z = self.generating_vector
        if z is None:
            shipped = load_generating_vector()
            if d > len(shipped):
                raise ValueError(f"the shipped generating vector has only {len(shipped)} components")
            z = shipped[:d]
        z = tuple(int(v) for v in z)
        if len(z) != d:
            raise ValueError(f"generating vector has {len(z)} components, expected {d}")
        if any(not 0 <= v < 1 << 32 for v in z):
            raise ValueError("generating vector components must be 32-bit unsigned integers")
        if z[0] % 2 == 0:
            raise ValueError("the first generating vector component must be odd")
        object.__setattr__(self, "dimensions", d)
        object.__setattr__(self, "generating_vector", z)


def lattice_point(spec: LatticeSpec, i):
    idx = np.asarray(i)
    rev = np.atleast_1d(bit_reverse32(idx)).ravel()
    z = np.asarray(spec.generating_vector, dtype=np.uint64)
    fixed = (rev[:, None] * z[None, :]) & np.uint64(0xFFFFFFFF)
    out = fixed.astype(np.float64) / 4294967296.0
    if idx.ndim == 0:
        return out[0]
    return out.reshape(idx.shape + (spec.dimensions,))


_BELOW_ONE = np.nextafter(1.0, 0.0)


def cranley_patterson(p, shift):
    """Componentwise ``(p + shift) mod 1``; never returns 1.0."""
    p = np.asarray(p, dtype=np.float64)
    shift = np.asarray(shift, dtype=np.float64)
    if p.shape[-1:] != shift.shape[-1:]:
        raise ValueError(f"dimension mismatch: point has {p.shape[-1:]} components, shift {shift.shape[-1:]}")
    r = p + shift
    r = r - np.floor(r)
    return np.minimum(r, _BELOW_ONE)


# ----------------------------------------------------------- vector search


def _shortest_dual_vector(a: np.ndarray, n: int) -> np.ndarray:
    """Length of the shortest nonzero ``h`` with ``h0 + a*h1 = 0 (mod n)``, per entry of ``a``."""
    a = np.asarray(a, dtype=np.int64) % n
    a = np.where(a > n // 2, a - n, a)
    u0 = np.full(a.shape, n, dtype=np.int64)
    u1 = np.zeros(a.shape, dtype=np.int64)
    v0 = -a
    v1 = np.ones(a.shape, dtype=np.int64)
    active = np.ones(a.shape, dtype=bool)
    while np.any(active):
        uu = u0 * u0 + u1 * u1
        vv = v0 * v0 + v1 * v1
        swap = active & (vv < uu)
        u0, v0 = np.where(swap, v0, u0), np.where(swap, u0, v0)
        u1, v1 = np.where(swap, v1, u1), np.where(swap, u1, v1)
        uu = u0 * u0 + u1 * u1
        mu = np.rint((u0 * v0 + u1 * v1) / uu).astype(np.int64)
        mu = np.where(active, mu, 0)
        active = mu != 0
        v0 = v0 - mu * u0
        v1 = v1 - mu * u1
    return np.sqrt((u0 * u0 + u1 * u1).astype(np.float64))


def spectral_score(zj, zk, m: int):
    """Normalised 2-D spectral test of the projection ``(zj, zk)`` of the first ``2**m`` points.

    1.0 is the hexagonal optimum; both components must be odd.
    """
    n = 1 << m
    zj = np.asarray(zj, dtype=np.int64) % n
    zk = np.asarray(zk, dtype=np.int64) % n
    inv = np.vectorize(lambda v: pow(int(v), -1, n), otypes=[np.int64])(zj)
    a = (zk * inv) % n
    return _shortest_dual_vector(a, n) / math.sqrt(2.0 * n / math.sqrt(3.0))


def search_generating_vector(dimensions: int, m_max: int = 16, m_min: int = 4) -> tuple:
    """Greedy component-wise search maximising the worst 2-D spectral score.

    ``z[0] = 1``.  Each further component is the odd ``z < 2**m_max`` whose
    worst score over all pairs with earlier components and all prefixes
    ``2**m``, ``m_min <= m <= m_max``, is largest (ties to the smallest ``z``).
    """
    candidates = np.arange(1, 1 << m_max, 2, dtype=np.int64)
    z = [1]
    for _ in range(1, dimensions):
        worst = np.full(candidates.shape, np.inf)
        for prev in z:
            for m in range(m_min, m_max + 1):
                n = 1 << m
                a = (candidates * pow(prev, -1, n)) % n
                score = _shortest_dual_vector(a, n) / math.sqrt(2.0 * n / math.sqrt(3.0))
                worst = np.minimum(worst, score)
        z.append(int(candidates[int(np.argmax(worst))]))
    return tuple(z)

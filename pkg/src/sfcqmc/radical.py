"""Radical inverses with digit permutations and scrambling.

The radical inverse in base ``b`` mirrors the base-``b`` digits of an integer
at the radix point.  Values are accumulated exactly in integer arithmetic as
a numerator over ``b**D``, where ``D`` is the largest digit count with
``b**D <= 2**53``, and converted to a double only at the end; the result is
therefore always strictly below one.  Index digits beyond position ``D``
cannot be represented in a double and are ignored.

Scrambles permute digit ``k`` (the one that lands at ``b**-(k+1)``):

``identity``
    no change.
``zaremba``
    ``(a + k) mod b``.
``faure``
    Faure's recursive permutation of ``{0, .., b-1}``, the same for every digit.
``digit``
    an independent pseudo-random permutation per digit position, derived
    from ``(seed, stream, k)``.
``owen``
    nested scrambling: the permutation of digit ``k`` is additionally keyed
    on all more significant digits, for the first ``depth`` digits.

The pseudo-random permutations are affine maps ``a -> (c*a + t) mod b``
with ``c != 0`` (a bijection for prime ``b``; for ``b = 2`` a flip or not),
with ``c`` and ``t`` drawn from a counter-based 64-bit hash.  Nothing is
stored, so results are reproducible on any platform.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PRIMES",
    "ScrambleSpec",
    "RadicalInverseSpec",
    "digit_capacity",
    "radical_inverse",
    "zaremba_digit",
    "faure_permutation",
    "owen_scramble",
    "inverse_radical",
    "partition_label",
    "leading_digit_residue",
    "mix64",
]

MASK64 = (1 << 64) - 1


def _first_primes(count):
    primes = []
    n = 2
    while len(primes) < count:
        if all(n % p for p in primes if p * p <= n):
            primes.append(n)
        n += 1
    return tuple(primes)


PRIMES = _first_primes(64)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def _digit_key(seed: int, stream: int, k: int) -> int:
    h = mix64(seed ^ 0x9E3779B97F4A7C15)
    h = mix64(h ^ ((stream + 1) * 0xD1B54A32D192ED03))
    return mix64(h ^ ((k + 1) * 0xA0761D6478BD642F))


@functools.lru_cache(maxsize=None)
def digit_capacity(base: int) -> int:
    """Largest ``D`` with ``base**D <= 2**53``."""
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    d = 0
    while base ** (d + 1) <= 1 << 53:
        d += 1
    return d


_MODES = ("identity", "zaremba", "faure", "digit", "owen")


@dataclass(frozen=True)
class ScrambleSpec:
    """Digit permutation applied before radical inversion.

    ``depth`` bounds the number of scrambled digits for ``digit`` and
    ``owen``; ``None`` means every representable digit for ``digit`` and 32
    digits for ``owen``.
    """

    mode: str = "identity"
    seed: int = 0
    depth: int | None = None

    def __post_init__(self):
        mode = "identity" if self.mode in ("none", None) else str(self.mode).lower()
        if mode not in _MODES:
            raise ValueError(f"unknown scramble {self.mode!r}; expected one of {', '.join(_MODES)}")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "seed", int(self.seed) & MASK64)
        if self.depth is not None:
            if int(self.depth) < 1 or int(self.depth) > 64:
                raise ValueError(f"scramble depth must be in [1, 64], got {self.depth}")
            object.__setattr__(self, "depth", int(self.depth))

    @classmethod
    def parse(cls, text: str) -> "ScrambleSpec":
        """Parse ``none``, ``zaremba``, ``faure``, ``digit:SEED`` or ``owen:SEED[:DEPTH]``."""
        name, _, rest = str(text).partition(":")
        name = name.strip().lower()
        if name in ("none", "identity"):
            return cls()
        if name in ("zaremba", "faure"):
            if rest:
                raise ValueError(f"{name} takes no seed")
            return cls(name)
        if name in ("digit", "owen"):
            parts = rest.split(":") if rest else []
            if len(parts) > 2:
                raise ValueError(f"malformed scramble {text!r}")
            seed = int(parts[0], 0) if parts else 0
            depth = int(parts[1]) if len(parts) == 2 else None
            return cls(name, seed, depth)
        raise ValueError(f"unknown scramble {text!r}")

    def digits_scrambled(self, base: int) -> int:
        cap = digit_capacity(base)
        if self.mode == "owen":
            return min(self.depth or 32, cap)
        if self.mode == "digit":
            return min(self.depth or cap, cap)
        return cap

    def __str__(self):
        if self.mode in ("digit", "owen"):
            text = f"{self.mode}:{self.seed}"
            return text if self.depth is None else f"{text}:{self.depth}"
        return "none" if self.mode == "identity" else self.mode


IDENTITY = ScrambleSpec()


@dataclass(frozen=True)
class RadicalInverseSpec:
    """A base and scramble; ``stream`` decorrelates seeded scrambles of different dimensions."""

    base: int
    scramble: ScrambleSpec = IDENTITY
    stream: int = 0

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be at least 2, got {self.base}")
        digit_capacity(self.base)

    def __call__(self, i):
        return radical_inverse(self, i)


def zaremba_digit(b: int, a: int, k: int) -> int:
    return (a + k) % b


@functools.lru_cache(maxsize=None)
def faure_permutation(b: int) -> tuple:
    """Faure's permutation of ``{0, .., b-1}``.

    Built recursively from ``(0, 1)``: for even ``b`` the doubled entries of
    the half-size permutation are followed by the same entries plus one; for
    odd ``b`` the centre value ``(b-1)/2`` is inserted in the middle of the
    ``b-1`` permutation after incrementing every entry at or above it.
    """
    if b < 2:
        raise ValueError(f"base must be at least 2, got {b}")
    if b == 2:
        return (0, 1)
    if b % 2 == 0:
        half = faure_permutation(b // 2)
        return tuple(2 * v for v in half) + tuple(2 * v + 1 for v in half)
    c = (b - 1) // 2
    prev = [v + 1 if v >= c else v for v in faure_permutation(b - 1)]
    return tuple(prev[:c]) + (c,) + tuple(prev[c:])


def _affine(h, b):
    if b == 2:
        return np.ones_like(h), h & np.uint64(1)
    c = np.uint64(1) + h % np.uint64(b - 1)
    return c, (h >> np.uint64(32)) % np.uint64(b)


def _permute_digit(scramble, base, stream, k, a, prefix):
    """Scrambled value of digit ``k`` given the original more significant digits ``prefix``."""
    b = np.uint64(base)
    mode = scramble.mode
    if mode == "zaremba":
        return (a + np.uint64(k % base)) % b
    if mode == "faure":
        return np.asarray(faure_permutation(base), dtype=np.uint64)[a]
    if mode in ("digit", "owen") and k < scramble.digits_scrambled(base):
        key = np.uint64(_digit_key(scramble.seed, stream, k))
        if mode == "owen":
            h = _mix64_array(key + prefix)
        else:
            h = _mix64_array(np.full(np.shape(a), key, dtype=np.uint64))
        c, t = _affine(h, base)
        return (c * a + t) % b
    return a


def _scramble_and_reflect(digits_of, n_shape, base, scramble, stream, significant=None):
    """Accumulate the scrambled, reflected numerator over ``base**D``.

    ``digits_of(k)`` returns digit ``k`` as a uint64 array.  When every
    digit from ``significant`` on is zero and the scramble maps a zero digit
    to zero there, the remaining positions only shift the numerator.
    """
    b = np.uint64(base)
    cap = digit_capacity(base)
    stop = cap
    if significant is not None:
        if scramble.mode in ("identity", "faure"):
            stop = min(cap, significant)
        elif scramble.mode in ("digit", "owen"):
            stop = min(cap, max(significant, scramble.digits_scrambled(base)))
    num = np.zeros(n_shape, dtype=np.uint64)
    prefix = np.zeros(n_shape, dtype=np.uint64)
    for k in range(stop):
        a = digits_of(k)
        num = num * b + _permute_digit(scramble, base, stream, k, a, prefix)
        prefix = prefix * b + a
    if stop < cap:
        num = num * np.uint64(base ** (cap - stop))
    return num


def _digit_count(flat, base):
    top = int(flat.max()) if flat.size else 0
    count = 1
    while top >= base:
        top //= base
        count += 1
    return count


def leading_digit_residue(spec: "RadicalInverseSpec", cell, m: int):
    """Residue ``i mod b**m`` of the indices whose scrambled radical inverse lies in cell ``cell``.

    That is, ``floor(b**m * phi(i)) == cell`` exactly when
    ``i % b**m == leading_digit_residue(spec, cell, m)``.  The digit
    permutations are inverted one digit at a time, most significant first,
    which also covers nested (Owen) scrambling.
    """
    base = spec.base
    if m > digit_capacity(base):
        raise ValueError(f"at most {digit_capacity(base)} base-{base} digits are representable")
    c = np.atleast_1d(np.asarray(cell)).astype(np.uint64)
    if np.any(c >= np.uint64(base**m)):
        raise ValueError(f"cell out of range [0, {base**m})")
    b = np.uint64(base)
    prefix = np.zeros(c.shape, dtype=np.uint64)
    residue = np.zeros(c.shape, dtype=np.uint64)
    for k in range(m):
        target = (c // np.uint64(base ** (m - 1 - k))) % b
        a = np.zeros(c.shape, dtype=np.uint64)
        for cand in range(base):
            trial = np.full(c.shape, cand, dtype=np.uint64)
            hit = _permute_digit(spec.scramble, base, spec.stream, k, trial, prefix) == target
            a = np.where(hit, trial, a)
        residue = residue + a * np.uint64(base**k)
        prefix = prefix * b + a
    out = residue.astype(np.int64)
    return int(out[0]) if np.ndim(cell) == 0 else out.reshape(np.shape(cell))


def _two_product(a, b):
    """``p + e == a * b`` exactly (Dekker), for finite doubles without overflow."""
    p = a * b

    def split(v):
        c = 134217729.0 * v
        hi = c - (c - v)
        return hi, v - hi

    a_hi, a_lo = split(a)
    b_hi, b_lo = split(b)
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def _to_unit(num, base):
    """``num / base**D`` as a double, rounded up where nearest rounding fell below.

    Never rounding below the exact value keeps ``floor(base**m * v)`` equal
    to the exact elementary interval of the point.
    """
    denom = base ** digit_capacity(base)
    n = num.astype(np.float64)
    v = n / float(denom)
    if denom & (denom - 1) == 0:
        return v
    p, e = _two_product(v, float(denom))
    below = (p - n) + e < 0
    return np.where(below, np.nextafter(v, 1.0), v)


def _index_array(i):
    arr = np.asarray(i)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.floor(arr)):
            raise TypeError("indices must be integer valued")
    elif arr.dtype.kind not in "iuO":
        raise TypeError("indices must be integers")
    if arr.dtype.kind != "u" and np.any(arr < 0):
        raise ValueError("indices must be non-negative")
    return arr.astype(np.uint64)


def radical_inverse(spec, i, scramble: ScrambleSpec | None = None, stream: int = 0):
    """Radical inverse ``phi_b(i)``, optionally scrambled.

    ``spec`` is a :class:`RadicalInverseSpec` or a plain integer base (in
    which case ``scramble`` and ``stream`` apply).  Accepts a scalar index
    (returns ``float``) or an integer array (returns a float64 array).
    """
    if not isinstance(spec, RadicalInverseSpec):
        spec = RadicalInverseSpec(int(spec), scramble or IDENTITY, stream)
    idx = _index_array(i)
    base = spec.base
    b = np.uint64(base)
    flat = np.atleast_1d(idx)
    rest = flat.copy()

    def digits_of(k):
        nonlocal rest
        a = rest % b
        rest = rest // b
        return a

    num = _scramble_and_reflect(
        digits_of, flat.shape, base, spec.scramble, spec.stream, _digit_count(flat, base)
    )
    out = _to_unit(num, base)
    if idx.ndim == 0:
        return float(out[0])
    return out.reshape(idx.shape)


def owen_scramble(b: int = 2, seed: int = 0, depth: int = 32, value=None, *, index=None, stream: int = 0):
    """Owen-scramble a value in ``[0, 1)`` or the radical inverse of an index.

    ``value`` must have a finite base-``b`` expansion representable in the
    digit capacity of the base (every double does for ``b = 2``).  Pass
    ``index=`` instead to scramble ``phi_b(index)``.
    """
    spec = ScrambleSpec("owen", seed, depth)
    if index is not None:
        return radical_inverse(RadicalInverseSpec(b, spec, stream), index)
    if value is None:
        raise TypeError("either value or index is required")
    v = np.asarray(value, dtype=np.float64)
    if np.any(v < 0) or np.any(v >= 1):
        raise ValueError("values must lie in [0, 1)")
    cap = digit_capacity(b)
    scaled = np.atleast_1d(v) * float(b**cap)
    if not np.all(scaled == np.floor(scaled)):
        raise ValueError(f"value has no finite base-{b} expansion within {cap} digits")
    whole = scaled.astype(np.uint64)
    bu = np.uint64(b)

    def digits_of(k):
        return (whole // np.uint64(b ** (cap - 1 - k))) % bu

    num = _scramble_and_reflect(digits_of, whole.shape, b, spec, stream)
    out = _to_unit(num, b)
    if v.ndim == 0:
        return float(out[0])
    return out.reshape(v.shape)


def _reverse_digits(b, m, j):
    out = 0
    for _ in range(m):
        j, a = divmod(j, b)
        out = out * b + a
    return out


def inverse_radical(b: int, m: int, j: int) -> int:
    """The index ``i < b**m`` with ``phi_b(i) == j / b**m``: the m-digit reversal of ``j``."""
    n = b**m
    if not 0 <= j < n:
        raise ValueError(f"j must lie in [0, {n}), got {j}")
    return _reverse_digits(b, m, int(j))


def partition_label(b: int, m: int, i):
    """``floor(b**m * phi_b(i))``, computed exactly from the low ``m`` digits of ``i``."""
    if isinstance(i, (int, np.integer)):
        if i < 0:
            raise ValueError("index must be non-negative")
        return _reverse_digits(b, m, int(i) % b**m)
    arr = _index_array(i)
    rest = arr % np.uint64(b**m)
    out = np.zeros_like(rest)
    for _ in range(m):
        out = out * np.uint64(b) + rest % np.uint64(b)
        rest = rest // np.uint64(b)
    return out.astype(np.int64)


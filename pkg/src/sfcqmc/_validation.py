"""Input validation shared by the samplers, the renderer and the diagnostics."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .curves import ImageDims


def check_image(X) -> ImageDims:
    """Image dimensions from an :class:`ImageDims` or an image-shaped array.

    Arrays are read as ``(height, width)`` or ``(height, width, channels)``;
    only the shape is used.
    """
    if isinstance(X, ImageDims):
        width, height = int(X.width), int(X.height)
    else:
        shape = np.shape(X)
        if len(shape) not in (2, 3):
            raise ValueError(
                f"expected an image of shape (height, width[, channels]) or ImageDims, got shape {shape}"
            )
        height, width = int(shape[0]), int(shape[1])
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    return ImageDims(width, height)


def check_requests(X, dims: ImageDims):
    """Validate an ``(n, 3)`` integer array of ``(x, y, s)`` sample requests."""
    X = np.asarray(X)
    if X.ndim == 1 and X.shape[0] == 3:
        X = X[None, :]
    if X.dtype.kind in "iu" and X.ndim == 2 and X.shape[0] > 0:
        X = X.astype(np.int64, copy=False)
    else:
        X = check_array(X, dtype=np.int64, ensure_2d=True)
    if X.shape[1] != 3:
        raise ValueError(f"sample requests need 3 columns (x, y, s), got {X.shape[1]}")
    x, y, s = X[:, 0], X[:, 1], X[:, 2]
    if np.any(x < 0) or np.any(y < 0) or np.any(x >= dims.width) or np.any(y >= dims.height):
        raise ValueError(f"pixel outside the {dims.width}x{dims.height} image")
    if np.any(s < 0):
        raise ValueError("sample numbers must be non-negative")
    return x, y, s


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)

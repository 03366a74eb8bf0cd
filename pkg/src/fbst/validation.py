"""Small input-validation helpers used by the public entry points."""
from __future__ import annotations

import numpy as np

from .exceptions import DataError, InvalidParameterError


def as_float_vector(x, name="x", min_len=1):
    """Coerce to a finite 1-D float array, or raise DataError."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise DataError(f"{name} needs at least {min_len} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def as_float_matrix(x, name="X"):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2:
        raise DataError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def check_positive(value, name):
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_finite(value, name):
    if not np.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    return float(value)


def check_probability(value, name, *, inclusive=True):
    value = check_finite(value, name)
    ok = 0.0 <= value <= 1.0 if inclusive else 0.0 < value < 1.0
    if not ok:
        raise InvalidParameterError(f"{name} must lie in the unit interval, got {value!r}")
    return value


def check_seed(seed, name="seed"):
    if seed is None or isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"{name} must be an integer, got {seed!r}")
    return int(seed)

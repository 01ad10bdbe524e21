"""Descriptive statistics and moving averages over numeric series."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .coltype import ColType
from .errors import ArgumentError, DomainError, FrameTypeError
from .frame import Series


@dataclass(frozen=True)
class DescriptiveSummary:
    count: int
    mean: float
    std: float
    min: float
    q25: float
    median: float
    q75: float
    max: float

    def as_dict(self) -> dict:
        return asdict(self)


def quantile(sorted_values, p: float) -> float:
    """Linear interpolation between closest ranks, ``h = (n - 1) p``."""
    n = len(sorted_values)
    h = (n - 1) * p
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])


def describe(s: Series) -> DescriptiveSummary:
    if not s.type.is_numeric:
        raise FrameTypeError(f"describe requires a numeric series, {s.name!r} is {s.type.value}")
    xs = sorted(float(v) for v in s.values if v is not None)
    n = len(xs)
    if n == 0:
        raise DomainError(f"series {s.name!r} has no values to describe")
    mean = math.fsum(xs) / n
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1)) if n > 1 else 0.0
    return DescriptiveSummary(
        count=n,
        mean=mean,
        std=std,
        min=xs[0],
        q25=quantile(xs, 0.25),
        median=quantile(xs, 0.5),
        q75=quantile(xs, 0.75),
        max=xs[-1],
    )


def rolling_mean(x: np.ndarray, window: int) -> np.ndarray:
    """Means of every length-``window`` slice, ``len(x) - window + 1`` values."""
    return sliding_window_view(np.asarray(x, dtype=float), window).mean(axis=1)


def _numeric_values(s: Series, window: int, minimum_len: int) -> np.ndarray:
    if not isinstance(window, (int, np.integer)) or window < 1 or window > minimum_len:
        raise ArgumentError(f"window {window!r} out of range for series of length {len(s)}")
    return s.to_numpy()


def moving_average(s: Series, window: int) -> Series:
    """Trailing mean over ``window`` points; labels come from each window's last point."""
    x = _numeric_values(s, window, len(s))
    out = rolling_mean(x, window)
    return Series(s.index[window - 1 :], s.name, tuple(out.tolist()), ColType.DD)


def centered_moving_average(s: Series, window: int) -> Series:
    """Symmetric moving average labelled at the window centre.

    Odd windows average ``window`` points. Even windows use the 2 x window
    form, weights ``[0.5, 1, ..., 1, 0.5] / window`` over ``window + 1``
    points, so the output has ``len(s) - window`` values.
    """
    if window % 2:
        x = _numeric_values(s, window, len(s))
        out = rolling_mean(x, window)
        half = (window - 1) // 2
        labels = s.index[half : half + len(out)]
    else:
        x = _numeric_values(s, window, len(s) - 1)
        weights = np.ones(window + 1)
        weights[0] = weights[-1] = 0.5
        out = sliding_window_view(x, window + 1) @ weights / window
        labels = s.index[window // 2 : window // 2 + len(out)]
    return Series(labels, s.name, tuple(out.tolist()), ColType.DD)

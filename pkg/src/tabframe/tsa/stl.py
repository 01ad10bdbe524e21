"""Seasonal-trend decomposition by loess (additive, two nested loops)."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..coltype import ColType
from ..errors import ArgumentError
from ..frame import Series
from ..stats import rolling_mean
from .loess import loess_smooth


def smallest_odd_at_least(v: float) -> int:
    c = math.ceil(v - 1e-12)
    return c if c % 2 else c + 1


@dataclass(frozen=True)
class StlParams:
    period: int
    seasonal: int = 7
    trend: int | None = None
    lowpass: int | None = None
    inner: int = 2
    outer: int | None = None
    robust: bool = False

    def resolved(self) -> "StlParams":
        """Fill in defaults and validate; raises ArgumentError."""
        if not isinstance(self.period, int) or self.period < 2:
            raise ArgumentError(f"period must be an integer >= 2, got {self.period!r}")
        ns = self.seasonal
        if not isinstance(ns, int) or ns < 7 or ns % 2 == 0:
            raise ArgumentError(f"seasonal smoother must be odd and >= 7, got {ns!r}")
        nt = self.trend or smallest_odd_at_least(1.5 * self.period / (1.0 - 1.5 / ns))
        nl = self.lowpass or smallest_odd_at_least(self.period)
        for name, v in (("trend", nt), ("lowpass", nl)):
            if not isinstance(v, int) or v < 3 or v % 2 == 0:
                raise ArgumentError(f"{name} smoother must be odd and >= 3, got {v!r}")
        outer = self.outer if self.outer is not None else (10 if self.robust else 0)
        if self.inner < 1 or outer < 0:
            raise ArgumentError(f"need inner >= 1 and outer >= 0, got {self.inner}, {outer}")
        return replace(self, trend=nt, lowpass=nl, outer=outer)


@dataclass(frozen=True)
class StlResult:
    trend: Series
    seasonal: Series
    remainder: Series
    period: int
    robust: bool
    weights: np.ndarray

    def components(self) -> dict[str, Series]:
        return {"trend": self.trend, "seasonal": self.seasonal, "remainder": self.remainder}


def robustness_weights(remainder: np.ndarray) -> np.ndarray:
    """Bisquare weights of ``|remainder| / (6 * median |remainder|)``."""
    r = np.abs(remainder)
    h = 6.0 * float(np.median(r))
    u = r / h if h > 0 else np.where(r > 0, np.inf, 0.0)
    w = np.where(u < 1.0, (1.0 - u * u) ** 2, 0.0)
    return np.where(u <= 1e-3, 1.0, w)


def _cycle_subseries(detrended, rw, period, span):
    """Smooth each cycle-subseries and extend it one period on both ends.

    Returns an array of length n + 2 * period laid out in time order.
    """
    n = len(detrended)
    out = np.empty(n + 2 * period)
    for k in range(period):
        y = detrended[k::period]
        m = len(y)
        pos = np.arange(m, dtype=float)
        smoothed = loess_smooth(pos, y, rw[k::period], span, 1, np.arange(-1, m + 1, dtype=float))
        out[k :: period][: m + 2] = smoothed
    return out


def _low_pass(c, period, span):
    lp = rolling_mean(rolling_mean(rolling_mean(c, period), period), 3)
    return loess_smooth(np.arange(len(lp), dtype=float), lp, None, span, 1)


def _inner_loop(y, trend, rw, p: StlParams):
    n = len(y)
    pos = np.arange(n, dtype=float)
    seasonal = np.zeros(n)
    for _ in range(p.inner):
        c = _cycle_subseries(y - trend, rw, p.period, p.seasonal)
        low = _low_pass(c, p.period, p.lowpass)
        seasonal = c[p.period : p.period + n] - low
        trend = loess_smooth(pos, y - seasonal, rw, p.trend, 1)
    return trend, seasonal


def stl_decompose(s: Series, params: StlParams | int, robust: bool | None = None) -> StlResult:
    """Split ``s`` into trend + seasonal + remainder.

    ``params`` may be just the period. The remainder is computed as
    ``observed - trend - seasonal`` so the three parts always add back up.
    """
    if isinstance(params, int):
        params = StlParams(period=params, robust=bool(robust))
    elif robust is not None:
        params = replace(params, robust=robust, outer=None if params.outer is None else params.outer)
    p = params.resolved()
    y = s.to_numpy()
    n = len(y)
    if n < 2 * p.period:
        raise ArgumentError(f"series of length {n} is shorter than two periods ({2 * p.period})")

    rw = np.ones(n)
    trend = np.zeros(n)
    trend, seasonal = _inner_loop(y, trend, rw, p)
    for _ in range(p.outer):
        rw = robustness_weights(y - trend - seasonal)
        trend, seasonal = _inner_loop(y, trend, rw, p)
    remainder = y - trend - seasonal

    def series(name, values):
        return Series(s.index, name, tuple(values.tolist()), ColType.DD)

    return StlResult(
        series("trend", trend),
        series("seasonal", seasonal),
        series("remainder", remainder),
        p.period,
        p.robust,
        rw,
    )

"""Locally weighted polynomial regression with tricube neighborhood weights."""

from __future__ import annotations

import numpy as np

from ..errors import ArgumentError


def _windows(x: np.ndarray, at: np.ndarray, k: int) -> np.ndarray:
    # The k nearest neighbours of a point are contiguous in sorted x. The best
    # window start is the first lo with x[lo] + x[lo + k] >= 2 * at (closer on
    # the left than the next point on the right).
    n = len(x)
    if k >= n:
        return np.zeros(len(at), dtype=int)
    pair_sums = x[: n - k] + x[k:]
    return np.searchsorted(pair_sums, 2.0 * at, side="left")


def tricube(r: np.ndarray) -> np.ndarray:
    r = np.clip(r, 0.0, 1.0)
    return (1.0 - r**3) ** 3


def loess_smooth(x, y, weights=None, span: int = 7, degree: int = 1, eval_at=None) -> np.ndarray:
    """Evaluate a local polynomial fit at ``eval_at`` (default: at ``x``).

    Each evaluation point uses its ``span`` nearest neighbours. Distances are
    scaled by the farthest of them (inflated by ``span / n`` when the span
    exceeds the number of points), weighted by the tricube kernel times the
    robustness ``weights``, and a weighted least-squares polynomial of
    ``degree`` is evaluated at the point. A neighbourhood too degenerate for
    the polynomial falls back to its weighted mean, or plain mean when every
    weight is zero.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    w_rob = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if len(y) != n or len(w_rob) != n:
        raise ArgumentError(f"x, y and weights must have equal length ({n}, {len(y)}, {len(w_rob)})")
    if degree not in (0, 1, 2):
        raise ArgumentError(f"degree must be 0, 1 or 2, got {degree!r}")
    if span < degree + 1:
        raise ArgumentError(f"span {span} too small for degree {degree}")
    if n < degree + 1:
        raise ArgumentError(f"{n} points are not enough for a degree-{degree} fit")
    if n > 1 and np.any(np.diff(x) <= 0):
        raise ArgumentError("x must be strictly increasing")
    at = x if eval_at is None else np.atleast_1d(np.asarray(eval_at, dtype=float))

    k = min(span, n)
    lo = _windows(x, at, k)
    idx = lo[:, None] + np.arange(k)
    xn, yn = x[idx], y[idx]
    dist = np.abs(xn - at[:, None])
    dmax = dist.max(axis=1)
    if span > n:
        dmax = dmax * (span / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(dmax[:, None] > 0, dist / dmax[:, None], 0.0)
    w = tricube(r) * w_rob[idx]

    total = w.sum(axis=1)
    dead = total <= 0
    safe_total = np.where(dead, 1.0, total)
    mean = (w * yn).sum(axis=1) / safe_total
    out = np.where(dead, yn.mean(axis=1), mean)
    if degree == 0:
        return out

    live = ~dead
    # centre at the evaluation point so the fitted value is the intercept
    xc = xn - at[:, None]
    if degree == 1:
        xbar = (w * xc).sum(axis=1) / safe_total
        dx = xc - xbar[:, None]
        sxx = (w * dx * dx).sum(axis=1)
        sxy = (w * dx * (yn - mean[:, None])).sum(axis=1)
        scale = np.where(dmax > 0, dmax, 1.0)
        fit = live & (sxx > (1e-10 * scale) ** 2 * safe_total)
        slope = np.where(fit, sxy / np.where(fit, sxx, 1.0), 0.0)
        return np.where(fit, mean - slope * xbar, out)

    for i in np.flatnonzero(live):
        s = dmax[i] if dmax[i] > 0 else 1.0
        u = xc[i] / s
        design = np.stack([np.ones(k), u, u * u], axis=1)
        sw = np.sqrt(w[i])
        coef, _, rank, _ = np.linalg.lstsq(design * sw[:, None], yn[i] * sw, rcond=None)
        if rank == 3:
            out[i] = coef[0]
    return out

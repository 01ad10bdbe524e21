"""Singular spectrum analysis: embedding, SVD, grouping, diagonal averaging,
and recurrent forecasting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..coltype import ColType
from ..errors import ArgumentError, DomainError
from ..frame import Series
from ..linalg import SvdResult, svd

NEGLIGIBLE = 1e-12
VERTICALITY_LIMIT = 1.0 - 1e-9


def trajectory_matrix(x: np.ndarray, window: int) -> np.ndarray:
    """L x K Hankel matrix with ``X[i, j] == x[i + j]``."""
    k = len(x) - window + 1
    return np.lib.stride_tricks.sliding_window_view(x, k)[:window].copy()


def hankelize(m: np.ndarray) -> np.ndarray:
    """Average the anti-diagonals of ``m`` into a series of length L + K - 1."""
    rows, cols = m.shape
    diag = np.add.outer(np.arange(rows), np.arange(cols)).ravel()
    sums = np.bincount(diag, weights=m.ravel(), minlength=rows + cols - 1)
    counts = np.bincount(diag, minlength=rows + cols - 1)
    return sums / counts


@dataclass(frozen=True)
class Eigentriple:
    sigma: float
    u: np.ndarray
    v: np.ndarray
    negligible: bool


@dataclass(frozen=True)
class SsaModel:
    series: Series
    window: int
    trajectory: np.ndarray
    svd: SvdResult

    @property
    def series_length(self) -> int:
        return len(self.series)

    @property
    def k(self) -> int:
        return self.series_length - self.window + 1

    @property
    def sigmas(self) -> np.ndarray:
        return self.svd.s

    @property
    def eigentriples(self) -> list[Eigentriple]:
        s = self.svd.s
        cut = NEGLIGIBLE * s[0]
        return [
            Eigentriple(float(s[i]), self.svd.u[:, i], self.svd.vt[i], bool(s[i] <= cut))
            for i in range(len(s))
        ]

    @property
    def rank(self) -> int:
        """Number of non-negligible eigentriples."""
        s = self.svd.s
        return int(np.count_nonzero(s > NEGLIGIBLE * s[0])) if s[0] > 0 else 0

    def contribution(self) -> np.ndarray:
        """Share of the trajectory's squared norm carried by each eigentriple."""
        e = self.svd.s**2
        return e / e.sum() if e.sum() > 0 else e


def ssa_decompose(s: Series, window: int | None = None) -> SsaModel:
    x = s.to_numpy()
    n = len(x)
    if n < 3:
        raise ArgumentError(f"SSA needs at least 3 points, got {n}")
    if window is None:
        window = n // 2
    if not isinstance(window, (int, np.integer)) or not 2 <= window <= n - 1:
        raise ArgumentError(f"window must be in 2..{n - 1}, got {window!r}")
    traj = trajectory_matrix(x, int(window))
    return SsaModel(s, int(window), traj, svd(traj))


def _check_groups(model: SsaModel, groups) -> list[list[int]]:
    r = len(model.svd.s)
    out, seen = [], set()
    for g in groups:
        g = [int(i) for i in g]
        for i in g:
            if not 0 <= i < r:
                raise ArgumentError(f"eigentriple index {i} outside 0..{r - 1}")
            if i in seen:
                raise ArgumentError(f"eigentriple {i} appears in more than one group")
            seen.add(i)
        out.append(g)
    return out


def _group_matrix(model: SsaModel, group: Sequence[int]) -> np.ndarray:
    u, s, vt = model.svd
    idx = list(group)
    if not idx:
        return np.zeros_like(model.trajectory)
    return (u[:, idx] * s[idx]) @ vt[idx]


def reconstruct_values(model: SsaModel, group: Sequence[int]) -> np.ndarray:
    return hankelize(_group_matrix(model, group))


def ssa_reconstruct(model: SsaModel, groups: Iterable[Iterable[int]]) -> list[Series]:
    """One reconstructed series per group of eigentriple indices."""
    groups = _check_groups(model, groups)
    idx = model.series.index
    return [
        Series(idx, f"group{j}", tuple(reconstruct_values(model, g).tolist()), ColType.DD)
        for j, g in enumerate(groups)
    ]


def recurrence_coefficients(model: SsaModel, group: Sequence[int]) -> np.ndarray:
    """Linear recurrence weights for the subspace spanned by the group's u vectors.

    The last coordinates of the u vectors must not carry (almost) all of
    their norm; otherwise the subspace is vertical and no recurrence exists.
    """
    (group,) = _check_groups(model, [group])
    if not group:
        raise ArgumentError("forecast group is empty")
    u = model.svd.u[:, group]
    pi = u[-1]
    nu2 = float(pi @ pi)
    if nu2 >= VERTICALITY_LIMIT:
        raise DomainError(f"degenerate verticality: squared last-coordinate norm {nu2:.12f}")
    return (u[:-1] @ pi) / (1.0 - nu2)


def ssa_forecast(model: SsaModel, group: Sequence[int], horizon: int) -> Series:
    """Continue the group's reconstruction ``horizon`` steps by the linear recurrence.

    Forecast labels continue the positions ``N .. N + horizon - 1``.
    """
    if not isinstance(horizon, (int, np.integer)) or horizon < 1:
        raise ArgumentError(f"horizon must be >= 1, got {horizon!r}")
    coef = recurrence_coefficients(model, group)
    y = list(reconstruct_values(model, group))
    lag = len(coef)
    for _ in range(horizon):
        y.append(float(np.dot(coef, y[-lag:])))
    n = model.series_length
    return Series(range(n, n + horizon), "forecast", tuple(y[n:]), ColType.DD)

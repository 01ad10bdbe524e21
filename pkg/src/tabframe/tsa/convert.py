"""Conversions between series and frames."""

from __future__ import annotations

from typing import Mapping, Sequence, Union

from ..coltype import ColType, infer_value_type
from ..errors import ArgumentError, DimensionError, DomainError, FrameTypeError
from ..frame import Frame, Series
from .stl import StlResult


def embed(s: Series, lag: int) -> Frame:
    """Lagged-window frame: columns ``t-lag .. t-1, t``, one row per window.

    Row labels are those of each window's last point.
    """
    n = len(s)
    if not isinstance(lag, int) or not 1 <= lag < n:
        raise ArgumentError(f"lag must be in 1..{n - 1}, got {lag!r}")
    if s.has_missing():
        raise DomainError(f"series {s.name!r} contains missing values")
    names = [f"t-{k}" for k in range(lag, 0, -1)] + ["t"]
    rows = n - lag
    data = [s.values[j : j + rows] for j in range(lag + 1)]
    return Frame._trusted(names, [s.type] * (lag + 1), data, s.index[lag:])


Components = Union[StlResult, Mapping[str, Series], Sequence[Series]]


def decomposition_to_frame(observed: Series, result: Components) -> Frame:
    """Plot-ready table: ``label``, ``observed``, then one column per component."""
    if isinstance(result, StlResult):
        parts = result.components()
    elif isinstance(result, Mapping):
        parts = dict(result)
    else:
        parts = {p.name: p for p in result}
    n = len(observed)
    for name, p in parts.items():
        if len(p) != n:
            raise DimensionError(f"component {name!r} has {len(p)} values, observed has {n}")
    labels = list(observed.index)
    try:
        label_type = infer_value_type(labels)
    except FrameTypeError:
        label_type, labels = ColType.STR, [str(v) for v in labels]
    names = ["label", "observed", *parts]
    types = [label_type, observed.type, *(p.type for p in parts.values())]
    data = [labels, observed.values, *(p.values for p in parts.values())]
    return Frame(names, types, data)

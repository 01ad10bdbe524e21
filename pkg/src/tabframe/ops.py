"""Relational operations over frames: mutation, missing values, aggregation,
filtering, sorting, grouping, and joins.

Every function is pure and returns a new Frame.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .coltype import INT64_MAX, INT64_MIN, ColType, coerce, infer_value_type
from .errors import ArgumentError, DimensionError, DomainError, FrameTypeError, LookupFrameError, SchemaError
from .frame import Frame

Row = Mapping[str, Any]


class AggOp(str, Enum):
    SUM = "sum"
    MEAN = "mean"
    MIN = "min"
    MAX = "max"
    COUNT = "count"
    STD = "std"
    MEDIAN = "median"
    FIRST = "first"
    LAST = "last"

    @property
    def needs_numeric(self) -> bool:
        return self in (AggOp.SUM, AggOp.MEAN, AggOp.STD, AggOp.MEDIAN)

    def result_type(self, source: ColType) -> ColType:
        if self is AggOp.COUNT:
            return ColType.I64
        if self in (AggOp.MEAN, AggOp.STD, AggOp.MEDIAN):
            return ColType.DD
        if self is AggOp.SUM:
            return ColType.I64 if source.is_integer else ColType.DD
        return source


class JoinKind(str, Enum):
    INNER = "inner"
    LEFT = "left"


def _agg_spec(spec) -> list[tuple[str, AggOp]]:
    items = spec.items() if isinstance(spec, Mapping) else spec
    return [(col, AggOp(op)) for col, op in items]


def check_agg(op: AggOp, coltype: ColType, col: str = "") -> None:
    if op.needs_numeric and not coltype.is_numeric:
        raise FrameTypeError(f"{op.value} requires a numeric column, {col!r} is {coltype.value}")


def _exact_variance(values) -> float:
    # rational arithmetic, rounded once
    xs = [Fraction(v) for v in values]
    mean = sum(xs) / len(xs)
    return float(sum((x - mean) ** 2 for x in xs) / (len(xs) - 1))


def reduce_values(values: Iterable, op: AggOp):
    """Apply one aggregate to the non-missing values of a sequence.

    Sums and means are exactly rounded; Std uses the n-1 denominator and is
    0.0 for a single value. Empty input gives 0 for Count, Missing otherwise.
    """
    present = [v for v in values if v is not None]
    if op is AggOp.COUNT:
        return len(present)
    if not present:
        return None
    if op is AggOp.SUM:
        if isinstance(present[0], float):
            return math.fsum(present)
        total = sum(present)
        if not INT64_MIN <= total <= INT64_MAX:
            raise DomainError(f"integer sum {total} is outside the I64 range")
        return total
    if op is AggOp.MEAN:
        return float(statistics.mean(present))
    if op is AggOp.STD:
        return 0.0 if len(present) == 1 else math.sqrt(_exact_variance(present))
    if op is AggOp.MEDIAN:
        return float(statistics.median(present))
    if op is AggOp.MIN:
        return min(present)
    if op is AggOp.MAX:
        return max(present)
    if op is AggOp.FIRST:
        return present[0]
    return present[-1]


# ---------------------------------------------------------------------------
# add / insert


def _append(frame: Frame, name: str, coltype: ColType, values: list) -> Frame:
    if name in frame:
        raise SchemaError(f"column {name!r} already exists")
    return Frame._trusted(
        [*frame.columns, name],
        [*frame.types, coltype],
        [*(frame.column(i) for i in range(frame.col_count)), values],
        frame.index,
    )


def add_column(frame: Frame, name: str, values: Sequence, coltype: ColType | None = None) -> Frame:
    if name in frame:
        raise SchemaError(f"column {name!r} already exists")
    if len(values) != frame.row_count:
        raise DimensionError(f"column {name!r} has {len(values)} values, frame has {frame.row_count} rows")
    t = coltype or infer_value_type(values)
    try:
        vals = [coerce(v, t) for v in values]
    except FrameTypeError as exc:
        raise FrameTypeError(f"column {name!r}: {exc}") from None
    return _append(frame, name, t, vals)


def add_calculated_column(
    frame: Frame, name: str, f: Callable[[Row], Any], coltype: ColType | None = None
) -> Frame:
    """Append a column computed by calling ``f`` once per row, in index order."""
    if name in frame:
        raise SchemaError(f"column {name!r} already exists")
    return add_column(frame, name, [f(r) for r in frame.rows()], coltype)


def insert_row(frame: Frame, at: int, values, label=None) -> Frame:
    """Splice one row in before position ``at`` (``at == row_count`` appends).

    ``values`` is a sequence in column order or a mapping by name; absent
    names are Missing. The default label is one past the largest integer label.
    """
    n = frame.row_count
    if not isinstance(at, int) or not 0 <= at <= n:
        raise ArgumentError(f"insert position {at!r} outside 0..{n}")
    if isinstance(values, Mapping):
        unknown = set(values) - set(frame.columns)
        if unknown:
            raise LookupFrameError(f"unknown column(s) {sorted(unknown)}")
        values = [values.get(c) for c in frame.columns]
    if len(values) != frame.col_count:
        raise DimensionError(f"row has {len(values)} values, frame has {frame.col_count} columns")
    row = []
    for name, t, v in zip(frame.columns, frame.types, values):
        try:
            row.append(coerce(v, t))
        except FrameTypeError:
            raise FrameTypeError(f"value {v!r} does not conform to column {name!r} ({t.value})") from None
    if label is None:
        ints = [lab for lab in frame.index if isinstance(lab, int) and not isinstance(lab, bool)]
        label = max(ints) + 1 if ints else n
    data = [list(frame.column(j)) for j in range(frame.col_count)]
    for col, v in zip(data, row):
        col.insert(at, v)
    index = list(frame.index)
    index.insert(at, label)
    return Frame._trusted(frame.columns, frame.types, data, index)


# ---------------------------------------------------------------------------
# missing values


def drop_missing(frame: Frame, how: str = "any", subset: Sequence[str] | None = None) -> Frame:
    how = how.lower()
    if how not in ("any", "all"):
        raise ArgumentError(f"how must be 'any' or 'all', got {how!r}")
    cols = [frame.column(c) for c in (subset if subset is not None else range(frame.col_count))]
    if not cols:
        return frame
    test = any if how == "any" else all
    keep = [i for i in range(frame.row_count) if not test(c[i] is None for c in cols)]
    return frame.take(keep)


FILL_STRATEGIES = ("constant", "mean", "median", "ffill")


def fill_missing(frame: Frame, col: str, strategy: str = "constant", value=None) -> Frame:
    """Replace Missing cells in one column.

    ``strategy`` is one of constant (with ``value``), mean, median or ffill.
    Mean/median fills turn an integer column into DD. Forward fill leaves
    leading Missing cells alone.
    """
    c = frame.position(col)
    t = frame.types[c]
    values = list(frame.column(c))
    strategy = strategy.lower()
    if strategy == "constant":
        try:
            fill = coerce(value, t)
        except FrameTypeError:
            raise FrameTypeError(f"fill value {value!r} does not conform to column {col!r} ({t.value})") from None
        values = [fill if v is None else v for v in values]
    elif strategy in ("mean", "median"):
        if not t.is_numeric:
            raise FrameTypeError(f"{strategy} fill requires a numeric column, {col!r} is {t.value}")
        fill = reduce_values(values, AggOp(strategy))
        if fill is None:
            raise DomainError(f"cannot compute {strategy} of column {col!r}: no values")
        if t.is_integer:
            t = ColType.DD
            values = [None if v is None else float(v) for v in values]
        values = [coerce(fill, t) if v is None else v for v in values]
    elif strategy == "ffill":
        last = None
        for i, v in enumerate(values):
            if v is None:
                values[i] = last
            else:
                last = v
    else:
        raise ArgumentError(f"unknown fill strategy {strategy!r}; expected one of {FILL_STRATEGIES}")
    types = list(frame.types)
    types[c] = t
    data = [frame.column(j) for j in range(frame.col_count)]
    data[c] = values
    return Frame._trusted(frame.columns, types, data, frame.index)


# ---------------------------------------------------------------------------
# aggregate / filter / sort


def aggregate(frame: Frame, spec) -> dict[str, Any]:
    """Whole-column aggregates, ``{column: value}`` in spec order."""
    out = {}
    for col, op in _agg_spec(spec):
        t = frame.col_type(col)
        check_agg(op, t, col)
        out[col] = reduce_values(frame.column(col), op)
    return out


def filter(frame: Frame, predicate: Callable[[Row], bool]) -> Frame:  # noqa: A001
    return frame.take([i for i, r in enumerate(frame.rows()) if predicate(r)])


def remove_rows(frame: Frame, predicate: Callable[[Row], bool]) -> Frame:
    return frame.take([i for i, r in enumerate(frame.rows()) if not predicate(r)])


def _sort_key(v):
    return (0,) if v is None else (1, v)


def _parse_sort_keys(keys) -> list[tuple[str, bool]]:
    out = []
    for k in [keys] if isinstance(keys, str) else keys:
        if isinstance(k, str):
            out.append((k, True))
            continue
        name, direction = k
        if isinstance(direction, str):
            d = direction.lower()
            if d not in ("asc", "ascending", "desc", "descending"):
                raise ArgumentError(f"unknown sort direction {direction!r}")
            direction = d.startswith("asc")
        out.append((name, bool(direction)))
    if not out:
        raise ArgumentError("sort_by needs at least one key")
    return out


def sort_by(frame: Frame, keys) -> Frame:
    """Stable lexicographic sort.

    ``keys`` holds column names or ``(name, ascending)`` pairs, where
    ``ascending`` may also be "asc"/"desc". Missing sorts first ascending,
    last descending.
    """
    parsed = _parse_sort_keys(keys)
    order = list(range(frame.row_count))
    for name, asc in reversed(parsed):
        col = frame.column(name)
        order.sort(key=lambda i: _sort_key(col[i]), reverse=not asc)
    return frame.take(order)


# ---------------------------------------------------------------------------
# grouping


@dataclass(frozen=True)
class GroupedFrame:
    source: Frame
    keys: tuple[str, ...]
    positions: dict  # key tuple -> source row positions, first-appearance order

    @property
    def groups(self) -> dict[tuple, Frame]:
        return {k: self.source.take(p) for k, p in self.positions.items()}

    def __len__(self) -> int:
        return len(self.positions)


def group_by(frame: Frame, keys: Sequence[str] | str) -> GroupedFrame:
    keys = (keys,) if isinstance(keys, str) else tuple(keys)
    if not 1 <= len(keys) <= 3:
        raise ArgumentError(f"group_by takes one to three key columns, got {len(keys)}")
    cols = [frame.column(k) for k in keys]
    positions: dict[tuple, list[int]] = {}
    for i, key in enumerate(zip(*cols)):
        positions.setdefault(key, []).append(i)
    return GroupedFrame(frame, keys, positions)


def group_aggregate(g: GroupedFrame, spec) -> Frame:
    """One row per group: key columns, then ``<col>_<op>`` per spec entry."""
    src = g.source
    items = _agg_spec(spec)
    names = list(g.keys)
    types = [src.col_type(k) for k in g.keys]
    for col, op in items:
        t = src.col_type(col)
        check_agg(op, t, col)
        names.append(f"{col}_{op.value}")
        types.append(op.result_type(t))
    data = [[] for _ in names]
    nk = len(g.keys)
    for key, pos in g.positions.items():
        for j, v in enumerate(key):
            data[j].append(v)
        for j, (col, op) in enumerate(items):
            vals = src.column(col)
            data[nk + j].append(coerce(reduce_values([vals[i] for i in pos], op), types[nk + j]))
    if len(set(names)) != len(names):
        raise SchemaError(f"aggregate output names collide: {names}")
    return Frame._trusted(names, types, data)


def group_rolling(g: GroupedFrame, col: str, window: int, op: AggOp | str) -> Frame:
    """Trailing-window aggregate within each group, aligned with the source rows.

    Returns the source frame with a ``<col>_rolling_<op>`` column appended; the
    first ``window - 1`` rows of every group are Missing.
    """
    op = AggOp(op)
    if not isinstance(window, int) or window < 1:
        raise ArgumentError(f"rolling window must be >= 1, got {window!r}")
    src = g.source
    t = src.col_type(col)
    check_agg(op, t, col)
    rt = op.result_type(t)
    vals = src.column(col)
    out = [None] * src.row_count
    for pos in g.positions.values():
        for k in range(window - 1, len(pos)):
            win = [vals[i] for i in pos[k - window + 1 : k + 1]]
            out[pos[k]] = coerce(reduce_values(win, op), rt)
    return _append(src, f"{col}_rolling_{op.value}", rt, out)


# ---------------------------------------------------------------------------
# joins


def join(left: Frame, right: Frame, on: Sequence[str] | str, kind: JoinKind | str = JoinKind.INNER) -> Frame:
    """Hash join on equal key tuples.

    Output columns are all left columns followed by the right non-key columns;
    a right name already used on the left gets a ``_2`` suffix. Rows come out
    in left order, then right order within a left row. Missing keys never
    match. The result has a fresh integer index.
    """
    on = [on] if isinstance(on, str) else list(on)
    kind = JoinKind(kind)
    if not on:
        raise ArgumentError("join needs at least one key column")
    for k in on:
        lt, rt = left.col_type(k), right.col_type(k)
        if lt is not rt and not (lt.is_string and rt.is_string):
            raise SchemaError(f"join key {k!r} is {lt.value} on the left but {rt.value} on the right")

    rcols = [c for c in right.columns if c not in on]
    out_names = list(left.columns)
    taken = set(out_names)
    for c in rcols:
        name = c if c not in taken else f"{c}_2"
        if name in taken:
            raise SchemaError(f"cannot disambiguate right column {c!r}")
        taken.add(name)
        out_names.append(name)

    rkeys = list(zip(*(right.column(k) for k in on)))
    table: dict[tuple, list[int]] = {}
    for j, key in enumerate(rkeys):
        if None not in key:
            table.setdefault(key, []).append(j)

    lkeys = zip(*(left.column(k) for k in on))
    pairs = []
    for i, key in enumerate(lkeys):
        matches = table.get(key, ()) if None not in key else ()
        if matches:
            pairs.extend((i, j) for j in matches)
        elif kind is JoinKind.LEFT:
            pairs.append((i, None))

    data = [[col[i] for i, _ in pairs] for col in (left.column(c) for c in left.columns)]
    for c in rcols:
        col = right.column(c)
        data.append([None if j is None else col[j] for _, j in pairs])
    types = [*left.types, *(right.col_type(c) for c in rcols)]
    return Frame._trusted(out_names, types, data)

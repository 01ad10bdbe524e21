"""The tabular data model: typed, column-major, immutable frames and series."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .coltype import ColType, coerce, format_value, infer_value_type
from .errors import DimensionError, DomainError, FrameTypeError, LookupFrameError, SchemaError


def _check_unique(names: Sequence[str]) -> None:
    seen = set()
    for n in names:
        if not isinstance(n, str):
            raise SchemaError(f"column name must be a string, got {n!r}")
        if n in seen:
            raise SchemaError(f"duplicate column name {n!r}")
        seen.add(n)


class Frame:
    """Named, typed columns over a shared row index.

    Storage is one tuple per column. Frames are never mutated after
    construction; every operation returns a new frame.
    """

    __slots__ = ("_names", "_types", "_index", "_data", "_pos")

    def __init__(
        self,
        columns: Sequence[str],
        types: Sequence[ColType],
        data: Sequence[Sequence[Any]],
        index: Sequence[Any] | None = None,
    ):
        columns = list(columns)
        _check_unique(columns)
        if len(types) != len(columns) or len(data) != len(columns):
            raise DimensionError(
                f"{len(columns)} columns but {len(types)} types and {len(data)} data vectors"
            )
        n = len(data[0]) if data else (len(index) if index is not None else 0)
        cols = []
        for name, t, vec in zip(columns, types, data):
            t = ColType(t)
            if len(vec) != n:
                raise DimensionError(f"column {name!r} has {len(vec)} values, expected {n}")
            try:
                cols.append(tuple(coerce(v, t) for v in vec))
            except FrameTypeError as exc:
                raise FrameTypeError(f"column {name!r}: {exc}") from None
        if index is not None and len(index) != n:
            raise DimensionError(f"index has {len(index)} labels, expected {n}")
        self._init(columns, [ColType(t) for t in types], cols, index, n)

    def _init(self, names, types, data, index, n):
        self._names = tuple(names)
        self._types = tuple(types)
        self._data = tuple(data)
        self._index = tuple(range(n)) if index is None else tuple(index)
        self._pos = {name: i for i, name in enumerate(self._names)}

    @classmethod
    def _trusted(cls, names, types, data, index=None) -> "Frame":
        # values already coerced, lengths already consistent
        self = cls.__new__(cls)
        n = len(data[0]) if data else (len(index) if index is not None else 0)
        self._init(names, types, [tuple(c) for c in data], index, n)
        return self

    # -- shape -------------------------------------------------------------

    @property
    def columns(self) -> tuple[str, ...]:
        return self._names

    @property
    def types(self) -> tuple[ColType, ...]:
        return self._types

    @property
    def index(self) -> tuple:
        return self._index

    @property
    def row_count(self) -> int:
        return len(self._index)

    @property
    def col_count(self) -> int:
        return len(self._names)

    @property
    def shape(self) -> tuple[int, int]:
        return self.row_count, self.col_count

    def __len__(self) -> int:
        return len(self._index)

    def schema(self) -> list[tuple[str, ColType]]:
        return list(zip(self._names, self._types))

    # -- lookup ------------------------------------------------------------

    def position(self, col: str | int) -> int:
        """Column position for a name or (possibly negative) position."""
        if isinstance(col, str):
            try:
                return self._pos[col]
            except KeyError:
                raise LookupFrameError(f"unknown column {col!r}") from None
        if isinstance(col, (int, np.integer)) and not isinstance(col, bool):
            c = int(col)
            if -self.col_count <= c < self.col_count:
                return c % self.col_count
        raise LookupFrameError(f"column position {col!r} out of range for {self.col_count} columns")

    def __contains__(self, name) -> bool:
        return name in self._pos

    def column(self, col: str | int) -> tuple:
        return self._data[self.position(col)]

    def col_type(self, col: str | int) -> ColType:
        return self._types[self.position(col)]

    def __getitem__(self, col: str) -> tuple:
        return self.column(col)

    def cell_at(self, row: int, col: str | int):
        """Stored value at row position ``row``; ``None`` for Missing."""
        c = self.position(col)
        if not isinstance(row, (int, np.integer)) or not 0 <= row < self.row_count:
            raise LookupFrameError(f"row position {row!r} out of range for {self.row_count} rows")
        return self._data[c][row]

    def row(self, i: int) -> dict[str, Any]:
        if not 0 <= i < self.row_count:
            raise LookupFrameError(f"row position {i!r} out of range for {self.row_count} rows")
        return {name: col[i] for name, col in zip(self._names, self._data)}

    def rows(self) -> Iterator[dict[str, Any]]:
        names = self._names
        for values in zip(*self._data):
            yield dict(zip(names, values))
        if not self._data:
            for _ in range(self.row_count):
                yield {}

    def records(self) -> list[tuple]:
        """Row-major tuples."""
        if not self._data:
            return [() for _ in range(self.row_count)]
        return list(zip(*self._data))

    def positions_of(self, label) -> list[int]:
        return [i for i, lab in enumerate(self._index) if lab == label]

    # -- selection ---------------------------------------------------------

    def _row_positions(self, rows) -> list[int]:
        n = self.row_count
        if rows is None:
            return list(range(n))
        if isinstance(rows, slice):
            return list(range(n))[rows]
        out = []
        for r in rows:
            if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or not -n <= r < n:
                raise LookupFrameError(f"row position {r!r} out of range for {n} rows")
            out.append(int(r) % n)
        return out

    def take(self, positions: Sequence[int], index=None) -> "Frame":
        data = [[col[i] for i in positions] for col in self._data]
        if index is None:
            index = [self._index[i] for i in positions]
        return Frame._trusted(self._names, self._types, data, index)

    def select(self, rows=None, cols=None, *, labels=None) -> "Frame":
        """Sub-frame by row positions (or index ``labels``) and column names/positions.

        ``None`` selects everything. Order of the selectors is kept.
        """
        if labels is not None:
            if rows is not None:
                raise LookupFrameError("pass either rows or labels, not both")
            positions = []
            for lab in labels:
                found = self.positions_of(lab)
                if not found:
                    raise LookupFrameError(f"unknown row label {lab!r}")
                positions.extend(found)
        else:
            positions = self._row_positions(rows)
        if cols is None:
            cpos = list(range(self.col_count))
        else:
            if isinstance(cols, (str, int)):
                cols = [cols]
            cpos = [self.position(c) for c in cols]
        names = [self._names[c] for c in cpos]
        _check_unique(names)
        data = [[self._data[c][i] for i in positions] for c in cpos]
        return Frame._trusted(
            names, [self._types[c] for c in cpos], data, [self._index[i] for i in positions]
        )

    def head(self, n: int = 5) -> "Frame":
        return self.select(rows=range(min(max(n, 0), self.row_count)))

    def tail(self, n: int = 5) -> "Frame":
        k = min(max(n, 0), self.row_count)
        return self.select(rows=range(self.row_count - k, self.row_count))

    def with_index(self, labels: Sequence[Any]) -> "Frame":
        if len(labels) != self.row_count:
            raise DimensionError(f"index has {len(labels)} labels, expected {self.row_count}")
        return Frame._trusted(self._names, self._types, self._data, list(labels))

    def to_series(self, col: str) -> "Series":
        c = self.position(col)
        return Series(self._index, self._names[c], self._data[c], self._types[c])

    def to_dict(self) -> dict[str, list]:
        return {name: list(col) for name, col in zip(self._names, self._data)}

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self._names == other._names
            and self._types == other._types
            and self._index == other._index
            and self._data == other._data
        )

    __hash__ = None

    def __repr__(self) -> str:
        return self.to_string(max_rows=20)

    def to_string(self, max_rows: int = 20) -> str:
        shown = self.head(max_rows)
        header = ["", *self._names]
        body = []
        for lab, rec in zip(shown.index, shown.records()):
            cells = [format_value(v, t) if v is not None else "NA" for v, t in zip(rec, self._types)]
            body.append([str(lab), *cells])
        widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [header, *body]]
        if self.row_count > max_rows:
            lines.append(f"... ({self.row_count} rows x {self.col_count} columns)")
        return "\n".join(lines)


@dataclass(frozen=True, eq=True)
class Series:
    """One value column paired with its row labels."""

    index: tuple
    name: str
    values: tuple
    type: ColType = ColType.DD

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.index) != len(self.values):
            raise DimensionError(f"series index has {len(self.index)} labels for {len(self.values)} values")

    @classmethod
    def from_values(cls, values: Iterable, name: str = "value", index=None) -> "Series":
        values = list(values)
        t = infer_value_type(values)
        if all(v is None for v in values):
            t = ColType.DD
        values = [coerce(v, t) for v in values]
        return cls(tuple(range(len(values))) if index is None else tuple(index), name, tuple(values), t)

    def __len__(self) -> int:
        return len(self.values)

    def has_missing(self) -> bool:
        return any(v is None for v in self.values)

    def to_numpy(self) -> np.ndarray:
        """float64 view of a numeric series; Missing is a domain error."""
        if not self.type.is_numeric:
            raise FrameTypeError(f"series {self.name!r} is {self.type.value}, not numeric")
        if self.has_missing():
            raise DomainError(f"series {self.name!r} contains missing values")
        return np.asarray(self.values, dtype=float)

    def to_frame(self) -> Frame:
        return Frame._trusted([self.name], [self.type], [self.values], self.index)


# ---------------------------------------------------------------------------
# constructors


def frame_from_dict(pairs: Mapping[str, Sequence[Any]], index=None) -> Frame:
    """Columns from an ordered mapping of name -> values; types are inferred."""
    names = list(pairs)
    data = [list(pairs[n]) for n in names]
    lengths = {len(d) for d in data}
    if len(lengths) > 1:
        raise DimensionError(f"ragged columns: lengths {sorted(lengths)}")
    types = []
    for n, d in zip(names, data):
        try:
            types.append(infer_value_type(d))
        except FrameTypeError as exc:
            raise FrameTypeError(f"column {n!r}: {exc}") from None
    return Frame(names, types, data, index)


def frame_from_lists(columns: Sequence[str], row_count: int, values: Sequence[Any], index=None) -> Frame:
    """Build a frame from a flat row-major list of values."""
    ncol = len(columns)
    if row_count < 0 or len(values) != row_count * ncol:
        raise DimensionError(
            f"{len(values)} values cannot fill {row_count} rows x {ncol} columns"
        )
    _check_unique(columns)
    if index is None and ncol == 0:
        index = range(row_count)
    return frame_from_dict({c: values[j::ncol] for j, c in enumerate(columns)}, index)


def empty_like(frame: Frame) -> Frame:
    return Frame._trusted(frame.columns, frame.types, [[] for _ in frame.columns], [])


def concat_rows(frames: Sequence[Frame]) -> Frame:
    """Stack frames with identical schema, keeping their labels."""
    first = frames[0]
    for f in frames[1:]:
        if f.schema() != first.schema():
            raise SchemaError("cannot concatenate frames with different schemas")
    data = [[v for f in frames for v in f.column(c)] for c in range(first.col_count)]
    index = [lab for f in frames for lab in f.index]
    return Frame._trusted(first.columns, first.types, data, index)

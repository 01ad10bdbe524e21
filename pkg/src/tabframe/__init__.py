"""Columnar data frames with typed CSV loading, relational operations and
time-series decomposition."""

from .coltype import ColType
from .errors import (
    ArgumentError,
    DimensionError,
    DomainError,
    FrameError,
    FrameTypeError,
    LookupFrameError,
    NumericError,
    ParseError,
    SchemaError,
    TransportError,
)
from .frame import Frame, Series, frame_from_dict, frame_from_lists
from .io import CsvOptions, from_csv, from_web, infer_types, to_csv
from .ops import (
    AggOp,
    GroupedFrame,
    JoinKind,
    add_calculated_column,
    add_column,
    aggregate,
    drop_missing,
    fill_missing,
    filter,
    group_aggregate,
    group_by,
    group_rolling,
    insert_row,
    join,
    remove_rows,
    sort_by,
)

__version__ = "0.1.0"

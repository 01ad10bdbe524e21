"""Row filter expressions: ``col op literal [and col op literal]*``.

Column names containing spaces or operators are back-quoted (`Zip Code`).
String literals may be single- or double-quoted. ``col == null`` and
``col != null`` test for Missing; every other comparison is false on a
Missing cell.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Any, Sequence

from ..coltype import PARSERS, ColType
from ..errors import FrameError, FrameTypeError, LookupFrameError

OPS = {
    "==": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "contains": lambda cell, lit: lit in cell,
}


class FilterSyntaxError(FrameError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<bq>`[^`]*`)
      | (?P<str>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
      | (?P<op>==|!=|<=|>=|<|>)
      | (?P<word>[^\s`"'<>=!]+)
    )""",
    re.VERBOSE,
)


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FilterSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def _unquote(s: str) -> str:
    body = s[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


@dataclass(frozen=True)
class Clause:
    column: str
    op: str
    literal: Any  # None tests for Missing
    is_null: bool = False

    def __call__(self, row) -> bool:
        cell = row[self.column]
        if self.is_null:
            return (cell is None) == (self.op == "==")
        if cell is None:
            return False
        return bool(OPS[self.op](cell, self.literal))


@dataclass(frozen=True)
class FilterExpression:
    text: str
    clauses: tuple[Clause, ...]

    def __call__(self, row) -> bool:
        return all(c(row) for c in self.clauses)

    @property
    def columns(self) -> list[str]:
        return [c.column for c in self.clauses]


def type_literal(raw: str, quoted: bool, coltype: ColType | None, column: str, op: str):
    if coltype is None:
        return raw
    if op == "contains":
        if not coltype.is_string:
            raise FrameTypeError(f"'contains' needs a string column, {column!r} is {coltype.value}")
        return raw
    try:
        if coltype.is_numeric:
            if quoted:
                raise ValueError
            try:
                return int(raw)
            except ValueError:
                return float(raw)
        return PARSERS[coltype](raw)
    except (ValueError, KeyError):
        raise FrameTypeError(f"literal {raw!r} is not a valid {coltype.value} for column {column!r}") from None


def parse_filter(text: str, schema: Sequence[tuple[str, ColType | None]]) -> FilterExpression:
    """Parse ``text`` against ``schema`` (name, type) pairs.

    A ``None`` type skips literal typing (names still checked).
    """
    types = dict(schema)
    toks = _tokens(text)
    clauses = []
    i = 0
    end = len(text)
    while True:
        if i >= len(toks):
            raise FilterSyntaxError("expected a column name", end)
        kind, val, off = toks[i]
        if kind == "bq":
            column = val[1:-1]
        elif kind == "word" and val.lower() not in ("and", "contains"):
            column = val
        else:
            raise FilterSyntaxError(f"expected a column name, found {val!r}", off)
        if column not in types:
            raise LookupFrameError(f"unknown column {column!r} in filter")
        i += 1
        if i >= len(toks):
            raise FilterSyntaxError("expected a comparison operator", end)
        kind, val, off = toks[i]
        op = val.lower() if kind == "word" else val
        if not (kind == "op" or op == "contains"):
            raise FilterSyntaxError(f"expected a comparison operator, found {val!r}", off)
        i += 1
        if i >= len(toks):
            raise FilterSyntaxError("expected a literal", end)
        kind, val, off = toks[i]
        if kind not in ("str", "word"):
            raise FilterSyntaxError(f"expected a literal, found {val!r}", off)
        if kind == "word" and val.lower() == "null":
            if op not in ("==", "!="):
                raise FilterSyntaxError("null only compares with == or !=", off)
            clauses.append(Clause(column, op, None, True))
        else:
            quoted = kind == "str"
            raw = _unquote(val) if quoted else val
            clauses.append(Clause(column, op, type_literal(raw, quoted, types[column], column, op)))
        i += 1
        if i == len(toks):
            break
        kind, val, off = toks[i]
        if kind != "word" or val.lower() != "and":
            raise FilterSyntaxError(f"expected 'and', found {val!r}", off)
        i += 1
    return FilterExpression(text, tuple(clauses))

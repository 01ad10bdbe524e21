"""CSV reading/writing with optional explicit column types, and HTTP loading."""

from __future__ import annotations

import csv
import io
import os
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import BinaryIO, Sequence, TextIO, Union

from .coltype import INT32_MAX, INT32_MIN, INT64_MAX, INT64_MIN, PARSERS, ColType, format_value, parse_datetime
from .errors import ParseError, SchemaError, TransportError
from .frame import Frame

DEFAULT_MISSING = frozenset({"", "NaN", "null", "NULL", "?", "*"})
MAX_REDIRECTS = 5
DEFAULT_TIMEOUT = 30.0

Source = Union[str, os.PathLike, bytes, BinaryIO, TextIO]


@dataclass(frozen=True)
class CsvOptions:
    sep: str = ","
    has_header: bool = True
    missing_tokens: frozenset = field(default=DEFAULT_MISSING)
    explicit_types: tuple | None = None

    def __post_init__(self):
        if len(self.sep) != 1 or self.sep in '"\r\n':
            raise ValueError(f"separator must be a single non-quote character, got {self.sep!r}")
        object.__setattr__(self, "missing_tokens", frozenset(self.missing_tokens))
        if self.explicit_types is not None:
            object.__setattr__(
                self, "explicit_types", tuple(ColType(t) for t in self.explicit_types)
            )


# ---------------------------------------------------------------------------
# reading


def _read_text(source: Source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            raw = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    else:
        raw = source.read()
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from None


def _records(text: str, options: CsvOptions):
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=options.sep, quotechar='"', strict=True)
    lines = []
    records = []
    try:
        for rec in reader:
            records.append(rec)
            lines.append(reader.line_num)
    except csv.Error as exc:
        raise ParseError(str(exc), line=reader.line_num) from None
    return records, lines


_INT_RE = re.compile(r"[+-]?\d+")


def _accepts(coltype: ColType, values: list[str]) -> bool:
    if coltype is ColType.I2:
        return all(v.lower() in ("true", "false") for v in values)
    if coltype in (ColType.I32, ColType.I64):
        if not all(_INT_RE.fullmatch(v) for v in values):
            return False
        ints = [int(v) for v in values]
        lo, hi = (INT32_MIN, INT32_MAX) if coltype is ColType.I32 else (INT64_MIN, INT64_MAX)
        return not ints or (lo <= min(ints) and max(ints) <= hi)
    if coltype is ColType.DD:
        try:
            for v in values:
                if "_" in v or v != v.strip():
                    return False
                float(v)
        except ValueError:
            return False
        return True
    if coltype is ColType.DT:
        try:
            for v in values:
                parse_datetime(v)
        except ValueError:
            return False
        return True
    return True


_CHAIN = (ColType.I2, ColType.I32, ColType.I64, ColType.DD, ColType.DT)


def infer_types(columns: Sequence[Sequence[str]], missing_tokens=DEFAULT_MISSING) -> list[ColType]:
    """Narrowest type per column accepted by all of its non-missing fields.

    Candidates are tried in the order I2, I32, I64, DD, DT with STR as the
    fallback; F32 and IN are never inferred.
    """
    out = []
    for col in columns:
        present = [v for v in col if v not in missing_tokens]
        if not present:
            out.append(ColType.STR)
            continue
        for t in _CHAIN:
            if _accepts(t, present):
                out.append(t)
                break
        else:
            out.append(ColType.STR)
    return out


def _convert_column(strings, coltype: ColType, missing, lines, col_no: int):
    parse = PARSERS[coltype]
    try:
        if coltype is ColType.I2:
            table = {"true": True, "false": False}
            values = [None if s in missing else table[s.lower()] for s in strings]
        elif coltype in (ColType.I32, ColType.I64):
            values = [None if s in missing else int(s) for s in strings]
            present = [v for v in values if v is not None]
            lo, hi = (INT32_MIN, INT32_MAX) if coltype is ColType.I32 else (INT64_MIN, INT64_MAX)
            if present and (min(present) < lo or max(present) > hi):
                raise ValueError("out of range")
        elif coltype is ColType.DD:
            values = [None if s in missing else float(s) for s in strings]
            values = [None if v != v else v for v in values]
        else:
            values = [None if s in missing else parse(s) for s in strings]
        return values
    except (ValueError, KeyError):
        pass
    # locate the offending field for the diagnostic
    for r, s in enumerate(strings):
        if s in missing:
            continue
        try:
            parse(s)
        except (ValueError, KeyError):
            raise ParseError(
                f"cannot parse {s!r} as {coltype.value}", line=lines[r], column=col_no
            ) from None
    raise ParseError(f"value out of range for {coltype.value}", column=col_no)


def from_csv(source: Source, options: CsvOptions | None = None, **kwargs) -> Frame:
    """Parse delimited text into a Frame.

    ``source`` is a path, raw bytes, or an open file. Keyword arguments are
    shorthand for CsvOptions fields. With ``explicit_types`` each field is
    parsed directly as its column type; otherwise types are inferred from all
    rows first.
    """
    if options is None:
        options = CsvOptions(**kwargs)
    elif kwargs:
        raise TypeError("pass either options or keyword fields, not both")
    text = _read_text(source)
    records, lines = _records(text, options)
    if not records:
        return Frame([], [], [])

    if options.has_header:
        names = records[0]
        records, lines = records[1:], lines[1:]
        seen = set()
        for n in names:
            if n in seen:
                raise SchemaError(f"duplicate column name {n!r} in header")
            seen.add(n)
    else:
        names = [f"C{i}" for i in range(len(records[0]))]
    ncol = len(names)

    kept, kept_lines = [], []
    for rec, line in zip(records, lines):
        if not rec:
            # a blank line is one missing field for single-column files, skipped otherwise
            if ncol == 1:
                kept.append([""])
                kept_lines.append(line)
            continue
        if len(rec) != ncol:
            raise ParseError(f"expected {ncol} fields, found {len(rec)}", line=line)
        kept.append(rec)
        kept_lines.append(line)

    columns = [list(c) for c in zip(*kept)] if kept else [[] for _ in names]
    missing = options.missing_tokens

    if options.explicit_types is not None:
        types = list(options.explicit_types)
        if len(types) != ncol:
            raise SchemaError(f"{len(types)} explicit types for {ncol} columns")
    else:
        types = infer_types(columns, missing)
    data = [
        _convert_column(col, t, missing, kept_lines, j + 1)
        for j, (col, t) in enumerate(zip(columns, types))
    ]
    return Frame._trusted(names, types, data, range(len(kept)))


def read_csv_header(source: Source, options: CsvOptions | None = None) -> list[str]:
    """Column names only, without reading data rows."""
    options = options or CsvOptions()
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8-sig") as fh:
            first = next(csv.reader(fh, delimiter=options.sep), [])
    else:
        first = next(csv.reader(io.StringIO(_read_text(source), newline=""), delimiter=options.sep), [])
    if not options.has_header:
        return [f"C{i}" for i in range(len(first))]
    return first


# ---------------------------------------------------------------------------
# writing


def _quote(field: str, sep: str) -> str:
    if sep in field or '"' in field or "\n" in field or "\r" in field:
        return '"' + field.replace('"', '""') + '"'
    return field


def format_csv(frame: Frame, options: CsvOptions | None = None) -> str:
    options = options or CsvOptions()
    sep = options.sep
    out = []
    if options.has_header:
        out.append(sep.join(_quote(n, sep) for n in frame.columns))
    formatted = [
        ["" if v is None else _quote(format_value(v, t), sep) for v in col]
        for col, t in zip((frame.column(i) for i in range(frame.col_count)), frame.types)
    ]
    if formatted:
        out.extend(sep.join(rec) for rec in zip(*formatted))
    else:
        out.extend("" for _ in range(frame.row_count))
    return "".join(line + "\n" for line in out)


def to_csv(frame: Frame, sink: Union[str, os.PathLike, BinaryIO, TextIO], options: CsvOptions | None = None) -> None:
    """Write ``frame`` as UTF-8 delimited text; Missing becomes an empty field."""
    text = format_csv(frame, options)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


# ---------------------------------------------------------------------------
# HTTP


class _LimitedRedirects(urllib.request.HTTPRedirectHandler):
    max_redirections = MAX_REDIRECTS


def fetch(url: str, timeout: float = DEFAULT_TIMEOUT) -> bytes:
    if not url.lower().startswith(("http://", "https://")):
        raise TransportError(f"unsupported URL scheme: {url!r}")
    opener = urllib.request.build_opener(_LimitedRedirects())
    req = urllib.request.Request(url, headers={"Accept": "text/csv, text/plain, */*"})
    try:
        with opener.open(req, timeout=timeout) as resp:
            status = resp.status
            body = resp.read()
    except urllib.error.HTTPError as exc:
        raise TransportError(f"GET {url} failed with HTTP {exc.code}", status=exc.code) from None
    except (urllib.error.URLError, OSError) as exc:
        raise TransportError(f"GET {url} failed: {exc}") from None
    if not 200 <= status < 300:
        raise TransportError(f"GET {url} returned HTTP {status}", status=status)
    return body


def from_web(url: str, options: CsvOptions | None = None, timeout: float = DEFAULT_TIMEOUT, **kwargs) -> Frame:
    """GET ``url`` (following up to five redirects) and parse the body as CSV."""
    return from_csv(fetch(url, timeout), options, **kwargs)

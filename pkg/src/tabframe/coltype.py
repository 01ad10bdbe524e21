"""Column type tags, per-type value coercion, and the textual cell forms.

Missing cells are represented by ``None`` everywhere. Float NaN is never stored;
it is normalized to ``None`` on the way in.
"""

from __future__ import annotations

import math
import re
from datetime import date, datetime, timedelta, timezone
from enum import Enum

import numpy as np

from .errors import FrameTypeError

INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1
INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class ColType(str, Enum):
    I2 = "I2"  # boolean
    I32 = "I32"
    I64 = "I64"
    F32 = "F32"
    DD = "DD"  # double
    STR = "STR"
    IN = "IN"  # categorical string
    DT = "DT"  # datetime, UTC, millisecond resolution

    def __repr__(self):
        return f"ColType.{self.value}"

    @property
    def is_numeric(self) -> bool:
        return self in NUMERIC

    @property
    def is_integer(self) -> bool:
        return self in (ColType.I32, ColType.I64)

    @property
    def is_string(self) -> bool:
        return self in (ColType.STR, ColType.IN)

    @classmethod
    def parse(cls, token: str) -> "ColType":
        try:
            return cls(token.strip().upper())
        except ValueError:
            names = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown column type {token!r} (expected one of {names})") from None


NUMERIC = frozenset({ColType.I32, ColType.I64, ColType.F32, ColType.DD})


def is_missing(value) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


# --------------------------------------------------------------------------
# datetimes

_ISO_RE = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})"
    r"(?:[T ](\d{2}):(\d{2})(?::(\d{2})(?:[.,](\d{1,9}))?)?)?"
    r"(Z|[+-]\d{2}:?\d{2})?"
)


def to_utc_ms(value: datetime) -> datetime:
    """Normalize to an aware UTC datetime truncated to whole milliseconds.

    Naive datetimes are taken to already be UTC.
    """
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    else:
        value = value.astimezone(timezone.utc)
    return value.replace(microsecond=value.microsecond - value.microsecond % 1000)


def datetime_to_ms(value: datetime) -> int:
    delta = to_utc_ms(value) - EPOCH
    return (delta.days * 86400 + delta.seconds) * 1000 + delta.microseconds // 1000


def ms_to_datetime(ms: int) -> datetime:
    return EPOCH + timedelta(milliseconds=ms)


def parse_datetime(text: str) -> datetime:
    m = _ISO_RE.fullmatch(text)
    if m is None:
        raise ValueError(f"not an ISO-8601 datetime: {text!r}")
    y, mo, d, hh, mi, ss, frac, tz = m.groups()
    micro = int((frac or "0")[:6].ljust(6, "0"))
    value = datetime(int(y), int(mo), int(d), int(hh or 0), int(mi or 0), int(ss or 0), micro)
    if tz and tz != "Z":
        sign = 1 if tz[0] == "+" else -1
        digits = tz[1:].replace(":", "")
        offset = timedelta(hours=int(digits[:2]), minutes=int(digits[2:]))
        value = value.replace(tzinfo=timezone(sign * offset))
    return to_utc_ms(value)


def format_datetime(value: datetime) -> str:
    value = to_utc_ms(value)
    text = value.strftime("%Y-%m-%dT%H:%M:%S")
    if value.microsecond:
        text += f".{value.microsecond // 1000:03d}"
    return text + "Z"


# --------------------------------------------------------------------------
# text <-> value


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _strict(text: str) -> str:
    if "_" in text or text != text.strip():
        raise ValueError(f"malformed number: {text!r}")
    return text


def _parse_i32(text: str) -> int:
    v = int(_strict(text))
    if not INT32_MIN <= v <= INT32_MAX:
        raise ValueError(f"{text!r} outside 32-bit range")
    return v


def _parse_i64(text: str) -> int:
    v = int(_strict(text))
    if not INT64_MIN <= v <= INT64_MAX:
        raise ValueError(f"{text!r} outside 64-bit range")
    return v


def _parse_dd(text: str):
    v = float(_strict(text))
    return None if v != v else v


def _parse_f32(text: str):
    v = _parse_dd(text)
    return None if v is None else float(np.float32(v))


def _identity(text: str) -> str:
    return text


PARSERS = {
    ColType.I2: _parse_bool,
    ColType.I32: _parse_i32,
    ColType.I64: _parse_i64,
    ColType.F32: _parse_f32,
    ColType.DD: _parse_dd,
    ColType.STR: _identity,
    ColType.IN: _identity,
    ColType.DT: parse_datetime,
}


def format_value(value, coltype: ColType) -> str | None:
    """Canonical text of one cell, ``None`` for Missing.

    Floats use the shortest representation that re-parses to the same value
    (at single precision for F32).
    """
    if value is None:
        return None
    if coltype is ColType.I2:
        return "true" if value else "false"
    if coltype is ColType.DD:
        return repr(float(value))
    if coltype is ColType.F32:
        return str(np.float32(value))
    if coltype is ColType.DT:
        return format_datetime(value)
    return str(value)


# --------------------------------------------------------------------------
# python value classification / coercion


def _to_python(value):
    if isinstance(value, np.generic):
        return value.item()
    return value


def kind_of(value) -> ColType:
    """Narrowest ColType describing a single non-missing python value."""
    if isinstance(value, bool):
        return ColType.I2
    if isinstance(value, int):
        return ColType.I32 if INT32_MIN <= value <= INT32_MAX else ColType.I64
    if isinstance(value, float):
        return ColType.DD
    if isinstance(value, (datetime, date)):
        return ColType.DT
    if isinstance(value, str):
        return ColType.STR
    raise FrameTypeError(f"unsupported cell value {value!r} of type {type(value).__name__}")


def infer_value_type(values) -> ColType:
    """Column type for a list of python values.

    Integers widen I32 -> I64 -> DD when mixed with larger ints or floats; any
    other mixture of kinds is rejected. An all-missing column is STR.
    """
    found = None
    for v in values:
        if is_missing(v):
            continue
        k = kind_of(_to_python(v))
        if found is None or k is found:
            found = k
        elif {found, k} <= NUMERIC:
            found = ColType.DD if ColType.DD in (found, k) else ColType.I64
        else:
            raise FrameTypeError(f"column mixes {found.value} and {k.value} values")
    return found or ColType.STR


def coerce(value, coltype: ColType):
    """Normalize ``value`` into the storage form for ``coltype``.

    Raises FrameTypeError when the value does not conform.
    """
    value = _to_python(value)
    if is_missing(value):
        return None
    ok = False
    if coltype is ColType.I2:
        ok = isinstance(value, bool)
    elif coltype is ColType.I32 or coltype is ColType.I64:
        lo, hi = (INT32_MIN, INT32_MAX) if coltype is ColType.I32 else (INT64_MIN, INT64_MAX)
        ok = isinstance(value, int) and not isinstance(value, bool) and lo <= value <= hi
    elif coltype is ColType.DD or coltype is ColType.F32:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = float(value)
            if coltype is ColType.F32:
                value = float(np.float32(value))
            ok = True
    elif coltype is ColType.DT:
        if isinstance(value, datetime):
            value, ok = to_utc_ms(value), True
        elif isinstance(value, date):
            value, ok = datetime(value.year, value.month, value.day, tzinfo=timezone.utc), True
    else:
        ok = isinstance(value, str)
    if not ok:
        raise FrameTypeError(f"value {value!r} does not conform to {coltype.value}")
    return value

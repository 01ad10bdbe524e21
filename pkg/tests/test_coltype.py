import datetime as dt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tabframe import ColType, FrameTypeError
from tabframe.coltype import (
    PARSERS,
    coerce,
    datetime_to_ms,
    format_datetime,
    format_value,
    infer_value_type,
    ms_to_datetime,
    parse_datetime,
)

UTC = dt.timezone.utc


def test_parse_token_is_case_insensitive():
    assert ColType.parse("dd") is ColType.DD
    assert ColType.parse(" I32 ") is ColType.I32
    with pytest.raises(ValueError):
        ColType.parse("float")


def test_numeric_classification():
    assert {t for t in ColType if t.is_numeric} == {ColType.I32, ColType.I64, ColType.F32, ColType.DD}
    assert not ColType.I2.is_numeric
    assert ColType.IN.is_string and ColType.STR.is_string


@pytest.mark.parametrize(
    "text, expected",
    [
        ("2020-01-01T00:00:00Z", dt.datetime(2020, 1, 1, tzinfo=UTC)),
        ("2020-01-01", dt.datetime(2020, 1, 1, tzinfo=UTC)),
        ("2020-01-01 12:30", dt.datetime(2020, 1, 1, 12, 30, tzinfo=UTC)),
        ("2020-01-01T12:00:00.123456Z", dt.datetime(2020, 1, 1, 12, 0, 0, 123000, tzinfo=UTC)),
        ("2020-01-01T02:00:00+02:00", dt.datetime(2020, 1, 1, tzinfo=UTC)),
        ("2019-12-31T19:00:00-0500", dt.datetime(2020, 1, 1, tzinfo=UTC)),
    ],
)
def test_parse_datetime(text, expected):
    assert parse_datetime(text) == expected


@pytest.mark.parametrize("text", ["2020-13-01", "01/02/2020", "2020-01-01T", "x"])
def test_parse_datetime_rejects(text):
    with pytest.raises(ValueError):
        parse_datetime(text)


def test_format_datetime_drops_zero_millis():
    assert format_datetime(dt.datetime(2020, 5, 6, 7, 8, 9, tzinfo=UTC)) == "2020-05-06T07:08:09Z"
    assert format_datetime(dt.datetime(2020, 5, 6, 7, 8, 9, 5000, tzinfo=UTC)) == "2020-05-06T07:08:09.005Z"


@given(st.integers(min_value=-(10**13), max_value=10**13))
def test_datetime_ms_round_trip(ms):
    d = ms_to_datetime(ms)
    assert datetime_to_ms(d) == ms
    assert parse_datetime(format_datetime(d)) == d


@given(st.floats(allow_nan=False))
def test_dd_text_round_trip_is_exact(x):
    back = PARSERS[ColType.DD](format_value(x, ColType.DD))
    assert back == x and np.signbit(back) == np.signbit(x)


@given(st.floats(width=32, allow_nan=False))
def test_f32_text_round_trip_is_exact(x):
    assert PARSERS[ColType.F32](format_value(x, ColType.F32)) == x


def test_nan_text_is_missing():
    assert PARSERS[ColType.DD]("nan") is None


@pytest.mark.parametrize("text", ["2147483648", "-2147483649"])
def test_i32_range(text):
    with pytest.raises(ValueError):
        PARSERS[ColType.I32](text)
    assert PARSERS[ColType.I64](text) == int(text)


def test_bool_parse():
    assert PARSERS[ColType.I2]("TRUE") is True
    assert PARSERS[ColType.I2]("False") is False
    with pytest.raises(ValueError):
        PARSERS[ColType.I2]("1")


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1, 2, None], ColType.I32),
        ([1, 2**40], ColType.I64),
        ([1, 2.5], ColType.DD),
        ([True, None, False], ColType.I2),
        (["a", None], ColType.STR),
        ([None, None], ColType.STR),
        ([float("nan"), 1.0], ColType.DD),
        ([np.int64(3), np.float64(0.5)], ColType.DD),
        ([dt.date(2020, 1, 1)], ColType.DT),
    ],
)
def test_infer_value_type(values, expected):
    assert infer_value_type(values) is expected


@pytest.mark.parametrize("values", [[1, "a"], [True, 1], [dt.datetime(2020, 1, 1), 3.0]])
def test_infer_value_type_rejects_mixtures(values):
    with pytest.raises(FrameTypeError):
        infer_value_type(values)


def test_coerce():
    assert coerce(3, ColType.DD) == 3.0 and isinstance(coerce(3, ColType.DD), float)
    assert coerce(np.int32(4), ColType.I32) == 4
    assert coerce(float("nan"), ColType.I32) is None
    assert coerce(0.1, ColType.F32) == float(np.float32(0.1))
    naive = dt.datetime(2020, 1, 1, 0, 0, 0, 999999)
    assert coerce(naive, ColType.DT) == dt.datetime(2020, 1, 1, 0, 0, 0, 999000, tzinfo=UTC)
    for bad, t in [(True, ColType.I32), (2**31, ColType.I32), ("1", ColType.DD), (1, ColType.STR), (1, ColType.I2)]:
        with pytest.raises(FrameTypeError):
            coerce(bad, t)

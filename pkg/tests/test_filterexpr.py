import pytest

from tabframe import FrameTypeError, LookupFrameError, filter, frame_from_dict, remove_rows
from tabframe.cli.filterexpr import FilterSyntaxError, parse_filter


def kept(frame, text):
    return filter(frame, parse_filter(text, frame.schema())).index


def test_numeric_comparison(dict_frame):
    assert kept(dict_frame, "ID > 1") == (1, 2)
    assert kept(dict_frame, "Values <= 3.21") == (0, 1)


def test_conjunction(dict_frame):
    assert kept(dict_frame, 'State == "BiH" and IsHome == true') == (0,)
    assert kept(dict_frame, "State != 'BiH' AND ID < 3") == (1,)


def test_backquoted_name(dict_frame):
    assert kept(dict_frame, "`Zip Code` > 20000") == (0, 1)


def test_contains(dict_frame):
    assert kept(dict_frame, 'City contains "e"') == (0, 1, 2)
    assert kept(dict_frame, "City contains att") == (1,)


def test_escaped_quote_in_literal():
    f = frame_from_dict({"s": ['say "hi"', "no"]})
    assert kept(f, r'''s == "say \"hi\""''') == (0,)


def test_null_tests_and_missing_comparisons():
    f = frame_from_dict({"x": [1, None, 3]})
    assert kept(f, "x == null") == (1,)
    assert kept(f, "x != null") == (0, 2)
    # comparisons on a Missing cell are false either way round
    assert kept(f, "x < 100") == (0, 2)
    assert remove_rows(f, parse_filter("x < 100", f.schema())).index == (1,)


def test_syntax_error_offset(dict_frame):
    with pytest.raises(FilterSyntaxError) as info:
        parse_filter("ID >", dict_frame.schema())
    assert info.value.offset == 4


@pytest.mark.parametrize("text", ["ID 1", "ID > 1 or ID < 3", "> 1", "ID > 1 and", "ID < null", ""])
def test_malformed(dict_frame, text):
    with pytest.raises(FilterSyntaxError):
        parse_filter(text, dict_frame.schema())


def test_unknown_column(dict_frame):
    with pytest.raises(LookupFrameError):
        parse_filter("nope == 1", dict_frame.schema())


@pytest.mark.parametrize("text", ["ID contains 1", 'ID == "1"', "ID == abc", "Date > yesterday"])
def test_type_errors(dict_frame, text):
    with pytest.raises(FrameTypeError):
        parse_filter(text, dict_frame.schema())


def test_unknown_types_skip_literal_checks():
    expr = parse_filter("a == abc", [("a", None)])
    assert expr.columns == ["a"]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabframe import ArgumentError, DomainError, FrameTypeError, Series
from tabframe.stats import centered_moving_average, describe, moving_average

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_describe_fixture_values():
    d = describe(Series.from_values([3.14, 3.21, 4.55]))
    assert (d.count, d.min, d.max, d.median) == (3, 3.14, 4.55, 3.21)


def test_describe_constant_and_quartiles():
    d = describe(Series.from_values([5, 5, 5]))
    assert d.std == 0 and d.q25 == d.median == d.q75 == 5
    d = describe(Series.from_values([1, 2, 3, 4]))
    assert (d.q25, d.q75) == (1.75, 3.25)
    assert describe(Series.from_values([7.0])).std == 0.0


def test_describe_skips_missing_and_rejects_empty():
    assert describe(Series.from_values([1.0, None, 3.0])).count == 2
    with pytest.raises(DomainError):
        describe(Series.from_values([None, None]))
    with pytest.raises(FrameTypeError):
        describe(Series.from_values(["a"]))


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=40))
def test_describe_ordering_and_mean(xs):
    d = describe(Series.from_values(xs))
    assert d.min <= d.q25 <= d.median <= d.q75 <= d.max
    assert d.std >= 0
    assert math.isclose(d.mean * d.count, math.fsum(xs), rel_tol=1e-12, abs_tol=1e-6)
    assert d.as_dict()["count"] == len(xs)


def test_moving_average_examples():
    s = Series.from_values([1, 2, 3, 4])
    ma = moving_average(s, 2)
    assert ma.values == (1.5, 2.5, 3.5)
    assert ma.index == (1, 2, 3)
    assert moving_average(s, 4).values == (2.5,)
    with pytest.raises(ArgumentError):
        moving_average(s, 5)
    with pytest.raises(ArgumentError):
        moving_average(s, 0)
    with pytest.raises(DomainError):
        moving_average(Series.from_values([1.0, None]), 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=40), st.data())
def test_moving_average_matches_brute_force(xs, data):
    w = data.draw(st.integers(1, len(xs)))
    got = moving_average(Series.from_values(xs), w).values
    want = [sum(xs[i : i + w]) / w for i in range(len(xs) - w + 1)]
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-12 * max(1.0, max(abs(x) for x in xs)) * w)


@given(st.integers(1, 10), finite)
def test_moving_average_constant_and_identity(w, c):
    s = Series.from_values([c] * 12)
    np.testing.assert_allclose(moving_average(s, w).values, c, rtol=1e-15)
    xs = [float(i) for i in range(12)]
    assert moving_average(Series.from_values(xs), 1).values == tuple(xs)


def test_centered_examples():
    assert centered_moving_average(Series.from_values([1, 2, 3]), 3).values == (2.0,)
    even = centered_moving_average(Series.from_values([1, 2, 3, 4]), 2)
    assert even.values == (2.0, 3.0)
    assert even.index == (1, 2)
    odd = centered_moving_average(Series.from_values([1, 2, 3, 4, 5]), 3)
    assert odd.index == (1, 2, 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=3, max_size=30), st.data())
def test_centered_odd_equals_trailing_values(xs, data):
    w = data.draw(st.integers(1, len(xs)).filter(lambda k: k % 2 == 1))
    s = Series.from_values(xs)
    assert centered_moving_average(s, w).values == moving_average(s, w).values


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=3, max_size=30), st.data())
def test_centered_even_is_mean_of_adjacent_windows(xs, data):
    w = data.draw(st.integers(2, len(xs) - 1).filter(lambda k: k % 2 == 0))
    got = centered_moving_average(Series.from_values(xs), w).values
    want = [(sum(xs[i : i + w]) / w + sum(xs[i + 1 : i + w + 1]) / w) / 2 for i in range(len(xs) - w)]
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-9)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_local_linear
from tabframe import ArgumentError
from tabframe.tsa.loess import loess_smooth, tricube

seeds = st.integers(0, 2**32 - 1)


def irregular_x(rng, n):
    return np.cumsum(rng.uniform(0.1, 2.0, n))


@settings(max_examples=30)
@given(seeds, st.integers(3, 25), st.sampled_from([0, 1, 2]))
def test_constant_reproduced(seed, span, degree):
    rng = np.random.default_rng(seed)
    x = irregular_x(rng, 20)
    out = loess_smooth(x, np.full(20, 4.25), None, span, degree)
    np.testing.assert_allclose(out, 4.25, rtol=0, atol=1e-10)


@settings(max_examples=30)
@given(seeds, st.integers(3, 40))
def test_line_reproduced(seed, span):
    rng = np.random.default_rng(seed)
    x = irregular_x(rng, 25)
    y = 3.0 - 0.7 * x
    at = np.concatenate([x, [x[0] - 2, x[-1] + 3]])
    np.testing.assert_allclose(loess_smooth(x, y, None, span, 1, at), 3.0 - 0.7 * at, rtol=0, atol=1e-10)


def test_quadratic_reproduced_by_degree_two():
    x = np.linspace(-3, 3, 31)
    y = 1 + x - 0.5 * x**2
    np.testing.assert_allclose(loess_smooth(x, y, None, 9, 2), y, atol=1e-10)


def test_full_span_matches_weighted_closed_form():
    rng = np.random.default_rng(11)
    x = irregular_x(rng, 15)
    y = rng.normal(size=15)
    at = 7.3
    d = np.abs(x - at)
    w = [(1 - (di / d.max()) ** 3) ** 3 for di in d]
    want = brute_local_linear(x.tolist(), y.tolist(), w, at)
    assert loess_smooth(x, y, None, 15, 1, [at])[0] == pytest.approx(want, abs=1e-12)


def test_span_above_n_inflates_radius():
    x = np.arange(5.0)
    y = np.array([0.0, 1.0, 0.0, 1.0, 0.0])
    at = 2.0
    d = np.abs(x - at) / (2.0 * 10 / 5)
    w = (1 - d**3) ** 3
    want = brute_local_linear(x.tolist(), y.tolist(), w.tolist(), at)
    assert loess_smooth(x, y, None, 10, 1, [at])[0] == pytest.approx(want, abs=1e-12)


def test_robustness_weights_apply():
    x = np.arange(9.0)
    y = np.zeros(9)
    y[4] = 100.0
    w = np.ones(9)
    w[4] = 0.0
    np.testing.assert_allclose(loess_smooth(x, y, w, 5, 1), 0.0, atol=1e-12)


def test_all_zero_weights_fall_back_to_plain_mean():
    x = np.arange(4.0)
    y = np.array([1.0, 2.0, 3.0, 6.0])
    out = loess_smooth(x, y, np.zeros(4), 4, 1, [1.5])
    assert out[0] == pytest.approx(3.0)


def test_tricube():
    np.testing.assert_allclose(tricube(np.array([0.0, 0.5, 1.0, 2.0])), [1.0, (1 - 0.125) ** 3, 0.0, 0.0])


def test_loess_errors():
    x = np.arange(5.0)
    with pytest.raises(ArgumentError):
        loess_smooth(x, x[:4])
    with pytest.raises(ArgumentError):
        loess_smooth(x, x, degree=3)
    with pytest.raises(ArgumentError):
        loess_smooth(x, x, span=2, degree=2)
    with pytest.raises(ArgumentError):
        loess_smooth(x[::-1], x)
    with pytest.raises(ArgumentError):
        loess_smooth([0.0], [1.0], span=3, degree=1)


@pytest.mark.parametrize("span", [5, 11, 30, 60])
def test_matches_statsmodels_lowess(span):
    lowess = pytest.importorskip("statsmodels.nonparametric.smoothers_lowess").lowess
    rng = np.random.default_rng(1)
    x = np.sort(rng.uniform(0, 10, 60))
    y = np.sin(x) + 0.2 * rng.normal(size=60)
    theirs = lowess(y, x, frac=span / 60, it=0, delta=0.0, return_sorted=False)
    np.testing.assert_allclose(loess_smooth(x, y, None, span, 1), theirs, rtol=0, atol=1e-12)

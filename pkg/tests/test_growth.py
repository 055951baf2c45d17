import math

import numpy as np
import pytest

from kothe.growth import BOUNDED, DIVERGING, INCONCLUSIVE, GrowthClass, GrowthConfig, classify_growth


def test_constant_is_bounded():
    g = classify_growth(np.ones(20))
    assert g.kind == BOUNDED and g.estimate == 1.0 and g.slope is None


def test_exponential_slope():
    n = np.arange(1, 41)
    g = classify_growth(np.exp(0.5 * n))
    assert g.kind == DIVERGING
    assert g.slope == pytest.approx(0.5, rel=1e-9)


def test_log_is_inconclusive():
    g = classify_growth(np.log(np.arange(1, 65)))
    assert g.kind == INCONCLUSIVE
    assert 0 < g.slope < 0.01
    assert g.ratio > 1.05


def test_window_is_last_quarter():
    assert classify_growth(np.ones(20)).window == 5
    assert classify_growth(np.ones(8)).window == 2


def test_infinite_sample_diverges():
    g = classify_growth([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, math.inf])
    assert g.kind == DIVERGING and math.isinf(g.slope)


def test_zero_sequence_bounded():
    assert classify_growth(np.zeros(8)).kind == BOUNDED


def test_validation():
    with pytest.raises(ValueError):
        classify_growth([1.0, 2.0])
    with pytest.raises(ValueError):
        classify_growth([1.0] * 7 + [-1.0])
    with pytest.raises(ValueError):
        classify_growth(np.ones(5), GrowthConfig(min_samples=8))


def test_round_trip():
    g = classify_growth(np.exp(np.arange(12.0)))
    assert GrowthClass.from_dict(g.to_dict()) == g
    assert GrowthConfig.from_dict(GrowthConfig(tol=0.1).to_dict()).tol == 0.1

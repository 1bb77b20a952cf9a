import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levygap import SpeedFunction as SF
from levygap.errors import InfiniteMassError
from levygap.speed import mu_integral, mu_interval, mu_tail, mu_tail_left, mu_tail_right, mu_total

SPEEDS = {
    "exp1": SF.exp_growth(1.0),
    "exp2.5": SF.exp_growth(2.5),
    "poly3": SF.poly_growth(3.0, 1.0),
    "poly2.2": SF.poly_growth(2.2, 0.5),
    "tab": SF.tabulated(np.linspace(0, 5, 51), np.exp(np.linspace(0, 5, 51)), tail_power=3.0),
}
xs = st.floats(min_value=0, max_value=50, allow_nan=False)


def test_documented_values():
    assert mu_tail(SPEEDS["exp1"], 1.0) == pytest.approx(2 / math.e, rel=1e-15)
    assert mu_tail(SPEEDS["poly3"], 1.0) == pytest.approx(0.25, rel=1e-15)
    assert mu_total(SPEEDS["exp1"]) == 2.0
    assert mu_total(SPEEDS["poly3"]) == pytest.approx(1.0, rel=1e-15)


def test_infinite_mass():
    with pytest.raises(InfiniteMassError):
        mu_total(SF.tabulated([0, 1, 2], [1, 1, 1], tail_power=0.5))
    with pytest.raises(InfiniteMassError):
        mu_total(SF.poly_growth(1.0))
    with pytest.raises(InfiniteMassError):
        mu_total(SF.constant(2.0))


def test_tail_at_zero_is_total():
    for sp in SPEEDS.values():
        assert mu_tail(sp, 0.0) == mu_total(sp)


@pytest.mark.parametrize("sp", SPEEDS.values(), ids=SPEEDS.keys())
@settings(max_examples=40, deadline=None)
@given(x=xs, y=xs)
def test_tail_nonincreasing(sp, x, y):
    lo, hi = sorted((x, y))
    assert mu_tail(sp, hi) <= mu_tail(sp, lo) * (1 + 1e-12)


@pytest.mark.parametrize("sp", SPEEDS.values(), ids=SPEEDS.keys())
@settings(max_examples=25, deadline=None)
@given(x=xs)
def test_additivity(sp, x):
    assert mu_tail(sp, x) + mu_interval(sp, -x, x) == pytest.approx(mu_total(sp), rel=1e-9)


@pytest.mark.parametrize("sp", SPEEDS.values(), ids=SPEEDS.keys())
def test_tail_vanishes(sp):
    assert mu_tail(sp, 1e7) < 1e-6 * mu_total(sp)


@pytest.mark.parametrize("sp", SPEEDS.values(), ids=SPEEDS.keys())
def test_integral_of_one_and_odd(sp):
    v, err = mu_integral(sp, lambda y: 1.0)
    assert v == pytest.approx(mu_total(sp), rel=1e-9)
    assert err < 1e-8
    odd, _ = mu_integral(sp, lambda y: y * math.exp(-y * y) + math.tanh(y))
    assert abs(odd) < 1e-9


def test_integral_examples():
    sp = SPEEDS["exp1"]
    assert mu_integral(sp, lambda y: abs(y) / 2)[0] == pytest.approx(1.0, rel=1e-10)
    ind, _ = mu_integral(sp, lambda y: float(abs(y) >= 1), breakpoints=(-1, 1))
    assert ind == pytest.approx(mu_tail(sp, 1.0), rel=1e-10)


def test_tabulated_power_law_tail_is_exact():
    # a(x) proportional to x^alpha, chosen so mu((x, inf)) = x^{1-alpha} / 2 beyond the grid
    alpha = 1.5
    x = np.linspace(1, 10, 10)
    a = 2 / (alpha - 1) * x ** alpha
    sp = SF.tabulated(x, a, tail_power=alpha)
    for t in (10.0, 20.0, 300.0):
        assert mu_tail_right(sp, t) == pytest.approx(t ** (1 - alpha) / 2, rel=1e-12)


def test_asymmetric_tabulated():
    x = np.linspace(-4, 4, 81)
    a = np.exp(np.where(x > 0, 2 * x, -x))
    sp = SF.tabulated(x, a, tail_power=4.0)
    assert not sp.is_symmetric
    assert mu_tail_right(sp, 1.0) < mu_tail_left(sp, 1.0)
    assert mu_tail(sp, 1.0) == pytest.approx(mu_tail_right(sp, 1.0) + mu_tail_left(sp, 1.0))


def test_tabulated_mirror_and_evaluation():
    sp = SPEEDS["tab"]
    assert sp.is_symmetric
    assert sp(np.array([-2.0]))[0] == sp(np.array([2.0]))[0]
    assert sp.inv(2.0) == pytest.approx(math.exp(-2.0), rel=1e-3)


def test_validation():
    with pytest.raises(ValueError):
        SF.exp_growth(0.0)
    with pytest.raises(ValueError):
        SF.tabulated([0, 1], [1, -1], tail_power=2)
    with pytest.raises(ValueError):
        mu_tail(SPEEDS["exp1"], -1.0)


def test_serialisation():
    assert SF.exp_growth(2.0).to_dict() == {"family": "exp", "params": {"b": 2.0}}
    assert SF.poly_growth(3.0, 2.0).to_dict() == {"family": "poly", "params": {"p": 3.0, "c": 2.0}}

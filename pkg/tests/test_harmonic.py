import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from levygap import CharacteristicExponent as CE
from levygap import HarmonicEvaluator, QuadConfig, fit_wlsc, omega, stable_H, wlsc_H_upper
from levygap.errors import DomainError, NonConvergenceError
from levygap.harmonic import accelerate_alternating
from levygap.symbol import WlscParams

from conftest import BUILTINS, quad_ev

ORACLE_SYMBOLS = {
    "stable_mixture_1_1_1.5": CE.stable_mixture(1.0, 1.0, 1.5),
    "cauchy_plus_brownian": CE.cauchy_plus_brownian(),
}


def test_omega_values():
    assert omega(1.5) == pytest.approx(2 * 0.7978845608028654, rel=1e-14)
    assert omega(1.5) == pytest.approx(math.sqrt(2 / math.pi) * 2, rel=1e-14)


def test_stable_closed_form_example(stable_ev):
    assert stable_ev.H(1.0) == pytest.approx(0.7978845608028654, rel=1e-14)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_stable_quadrature_matches_closed_form(alpha, x):
    v, err = quad_ev(CE.stable(alpha)).eval_H(x)
    exact = stable_H(alpha, x)
    assert abs(v - exact) <= 1e-6 * exact
    assert err <= max(1e-10, 1e-8 * exact) * 10


@pytest.mark.parametrize("x", [0.1, 1.0, 2.0, 10.0])
def test_brownian_quadrature(x):
    assert abs(quad_ev(CE.brownian()).H(x) - x / 2) <= 1e-8


@pytest.mark.parametrize("name", ORACLE_SYMBOLS)
@pytest.mark.parametrize("x", ["0.5", "1", "3"])
def test_quadrature_against_mpmath_oracle(oracles, name, x):
    ref = oracles["H"][name][x]
    assert HarmonicEvaluator(ORACLE_SYMBOLS[name]).H(float(x)) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("psi", BUILTINS.values(), ids=BUILTINS.keys())
def test_zero_and_even(psi):
    ev = quad_ev(psi)
    assert ev.H(0.0) == 0.0
    for x in (0.3, 2.0, 7.0):
        assert ev.H(-x) == ev.H(x)


def test_derivative_examples():
    bm = quad_ev(CE.brownian())
    assert bm.H_prime(5.0) == pytest.approx(0.5, rel=1e-8)
    st = quad_ev(CE.stable(1.5))
    assert st.H_prime(1.0) == pytest.approx(0.3989422804014327, rel=1e-7)
    assert st.H_prime(-1.0) == pytest.approx(-0.3989422804014327, rel=1e-7)
    with pytest.raises(ValueError):
        st.H_prime(0.0)


@pytest.mark.parametrize("psi", BUILTINS.values(), ids=BUILTINS.keys())
@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_derivative_matches_finite_difference(psi, x):
    ev = quad_ev(psi)
    h = 1e-3 * x
    fd = (ev.H(x + h) - ev.H(x - h)) / (2 * h)
    assert ev.H_prime(x) == pytest.approx(fd, rel=1e-4)


@pytest.mark.parametrize("alpha", [1.3, 1.7])
@pytest.mark.parametrize("c", [2.0, 5.0])
def test_stable_scaling(alpha, c):
    ev = quad_ev(CE.stable(alpha))
    for x in (0.2, 1.5):
        (a, ea), (b, eb) = ev.eval_H(c * x), ev.eval_H(x)
        assert abs(a - c ** (alpha - 1) * b) <= 10 * (ea + c ** (alpha - 1) * eb) + 1e-12


@pytest.mark.parametrize("psi", BUILTINS.values(), ids=BUILTINS.keys())
def test_monotone_in_x(psi):
    ev = HarmonicEvaluator(psi)
    vals = ev.H_array(np.geomspace(1e-3, 100, 60))
    assert np.all(np.diff(vals) >= -1e-12)


@pytest.mark.parametrize("psi", BUILTINS.values(), ids=BUILTINS.keys())
def test_below_scaling_envelope(psi):
    w = fit_wlsc(psi)
    if w is None or w.delta_s <= 1:
        pytest.skip("no scaling envelope")
    ev = HarmonicEvaluator(psi)
    for x in np.geomspace(1e-3, 1e3, 25):
        assert ev.H(x) <= wlsc_H_upper(psi, w, x)


def test_mixture_envelope_formula():
    c1, c2, a = 1.0, 2.0, 1.5
    psi = CE.stable_mixture(c1, c2, a)
    w = WlscParams(a, 1.0)
    for x in (0.1, 1.0, 4.0):
        expected = 10 / (math.pi * (a - 1)) / (c1 / x + c2 * x ** (1 - a))
        assert wlsc_H_upper(psi, w, x) == pytest.approx(expected, rel=1e-13)


def test_stable_envelope_value(stable_ev):
    env = wlsc_H_upper(CE.stable(1.5), WlscParams(1.5, 1.0), 1.0)
    assert env == pytest.approx(6.366197723675814, rel=1e-13)
    assert stable_ev.H(1.0) <= env


def test_envelope_domain():
    with pytest.raises(DomainError):
        wlsc_H_upper(CE.cauchy_plus_brownian(), WlscParams(1.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        wlsc_H_upper(CE.stable(1.5), WlscParams(1.5, 1.0), 0.0)


def test_divergent_symbol_raises_with_partial_value():
    xi = np.linspace(0, 10, 50)
    psi = CE.tabulated(xi, xi ** 0.8, tail_power=0.8)
    with pytest.raises(NonConvergenceError) as info:
        HarmonicEvaluator(psi).eval_H(1.0)
    assert math.isfinite(info.value.partial)


def test_cache_is_bit_identical_and_thread_safe():
    psi = CE.stable_mixture(1.0, 1.0, 1.5)
    xs = np.geomspace(0.01, 50, 40)
    ref = [HarmonicEvaluator(psi).H(x) for x in xs]
    ev = HarmonicEvaluator(psi)
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(ev.H, list(xs) * 3))
    assert got == ref * 3
    assert [ev.H(x) for x in xs] == ref


def test_tolerance_is_configurable():
    psi = CE.cauchy_plus_brownian()
    loose = HarmonicEvaluator(psi, QuadConfig(atol=1e-6, rtol=1e-5)).H(2.0)
    tight = HarmonicEvaluator(psi, QuadConfig(atol=1e-12, rtol=1e-10)).H(2.0)
    assert loose == pytest.approx(tight, rel=1e-5)


def test_accelerate_alternating_log2():
    terms = [(-1) ** k / (k + 1) for k in range(40)]
    partial = np.cumsum(terms)
    assert accelerate_alternating(partial, 12) == pytest.approx(math.log(2), abs=1e-10)
    assert abs(partial[-1] - math.log(2)) > 1e-3

import json
import math
from pathlib import Path

import pytest

from levygap import CharacteristicExponent, HarmonicEvaluator, QuadConfig, SpeedFunction

ORACLES = json.loads((Path(__file__).parent / "oracles" / "values.json").read_text())

E = math.e


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


BUILTINS = {
    "stable-1.5": CharacteristicExponent.stable(1.5),
    "brownian": CharacteristicExponent.brownian(1.0),
    "mixture": CharacteristicExponent.stable_mixture(1.0, 1.0, 1.5),
    "cauchy-brownian": CharacteristicExponent.cauchy_plus_brownian(),
}


@pytest.fixture(scope="session")
def exp1():
    return SpeedFunction.exp_growth(1.0)


@pytest.fixture(scope="session")
def brownian_ev():
    return HarmonicEvaluator(CharacteristicExponent.brownian(1.0))


@pytest.fixture(scope="session")
def stable_ev():
    return HarmonicEvaluator(CharacteristicExponent.stable(1.5))


def quad_ev(psi):
    """Evaluator forced onto the quadrature path."""
    return HarmonicEvaluator(psi, QuadConfig(closed_form=False))

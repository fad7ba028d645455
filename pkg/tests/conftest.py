import math

import pytest

from eulerfan.gas import GasModel, PrimState
from eulerfan.riemann1d import RiemannData

CV_GRID = (0.51, 1.0, 1.5, 2.5, 5.0)
RATIO_GRID = (1.1, 2.0, 10.0, 100.0)
FRACTIONS = (0.90, 0.95, 0.99)


def make_data(c_v, left, right):
    return RiemannData(GasModel(c_v), PrimState(*left), PrimState(*right))


def normalized(c_v, p_plus, rho_v2, rho=1.0, p_minus=1.0):
    """Normalised one-shock data with prescribed rho_- v_-**2."""
    return make_data(c_v, (rho, 0.0, math.sqrt(rho_v2 / rho), p_minus), (rho, 0.0, 0.0, p_plus))


@pytest.fixture
def gas15():
    return GasModel(1.5)


@pytest.fixture
def case13():
    # pure 1-shock + contact: v_- = shock_branch(1, 1, 2), rho_M- = 1.5 != rho_+ = 1
    return make_data(1.5, (1.0, 0.0, math.sqrt(1.0 / 3.0), 1.0), (1.0, 0.0, 0.0, 2.0))


@pytest.fixture
def case15():
    return make_data(1.5, (1.0, 0.0, 0.5, 1.0), (1.0, 0.0, 0.0, 2.0))

"""The frozen reference values are reproducible from the oracle module."""
import numpy as np
import pytest

import frozen
from oracles import gamma_fd, mu_c_fd


def rho(x):
    return 2.0 + x


def drho(x):
    return np.ones_like(x)


def test_gamma_oracle_reproduces_frozen_values():
    g = gamma_fd(1.0, 0.0, 1.0, 0.0, 0.0, rho, drho, n=500, count=3)
    np.testing.assert_allclose(g, frozen.GAMMA_LAM0[:3], rtol=1e-7)


@pytest.mark.parametrize("n", [400])
def test_mu_c_oracle_close_to_frozen(n):
    assert mu_c_fd(1.0, 1.0, 1.0, n=n) == pytest.approx(frozen.MU_C_FD[0], rel=1e-7)

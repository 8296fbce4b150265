import math

import numpy as np
import numpy.testing as npt
import pytest

from src.elliptic import complete_integrals
from src.exceptions import UnsupportedClassError
from src.oracle import hamiltonian_rhs, integrate, pendulum_return_time
from src.pendulum import PendulumState, modulus, pendulum_period


@pytest.mark.parametrize("nu, c", [(0.5 * math.pi, 1.0), (0.0, 3.0), (2.5 * math.pi, -1.2), (1.0, -2.2)])
def test_energy_and_speed_are_conserved(nu, c):
    traj = integrate(PendulumState(nu, c), 50.0)
    energies = traj.energies()
    assert np.max(np.abs(energies - energies[0])) <= 1e-9

    for z in traj.at(np.linspace(0.0, 50.0, 201)).T:
        _, _, dx, dy, dtheta = hamiltonian_rhs(0.0, z)
        npt.assert_allclose(math.sqrt(dx ** 2 + dy ** 2 + dtheta ** 2), 1.0, atol=1e-6)


def test_pose_is_wrapped():
    traj = integrate(PendulumState(0.0, 0.0), 4.0)
    x, y, theta = traj.pose(4.0)
    npt.assert_allclose((x, y, theta), (0.0, 0.0, 2.0 * math.pi - 4.0), atol=1e-10)
    assert traj.pose(4.0, wrap=False)[2] == pytest.approx(-4.0, abs=1e-10)


@pytest.mark.parametrize("nu, c", [(0.5 * math.pi, 1.0), (0.5 * math.pi, 0.0), (1.0, -0.5), (0.0, 3.0), (5.0, -2.5)])
def test_return_time_matches_period(nu, c):
    s = PendulumState(nu, c)
    npt.assert_allclose(pendulum_return_time(s), pendulum_period(s), rtol=1e-9)


def test_near_separatrix_return_time():
    s = PendulumState(0.0, 2.001)
    k = modulus(s)
    big_k, _ = complete_integrals(k)
    npt.assert_allclose(pendulum_return_time(s), 4.0 * k * big_k, rtol=1e-8)


@pytest.mark.parametrize("nu, c", [(0.0, 2.0), (math.pi, 0.0), (0.0, 0.0)])
def test_return_time_needs_a_periodic_class(nu, c):
    with pytest.raises(UnsupportedClassError):
        pendulum_return_time(PendulumState(nu, c))


def test_non_positive_horizon():
    with pytest.raises(ValueError):
        integrate(PendulumState(1.0, 1.0), 0.0)

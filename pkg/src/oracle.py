"""Direct integration of the Hamiltonian system

Reference trajectories for the closed forms: the state (nu, c, x, y, theta)
follows nu' = c, c' = -sin(nu), x' = sin(nu/2) cos(theta),
y' = sin(nu/2) sin(theta), theta' = -cos(nu/2). theta is integrated on the
real line and only wrapped on output.
"""
import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from src.exceptions import IntegrationError, UnsupportedClassError
from src.pendulum import GeodesicClass, PendulumState, classify

RTOL = 1e-12
ATOL = 1e-12

_SCAN_STEP = 1.0 / 32.0
_INITIAL_HORIZON = 16.0
_MAX_HORIZON = 1e5


def hamiltonian_rhs(t: float, z: np.ndarray) -> np.ndarray:
    nu, c, _, _, theta = z
    half_sin = math.sin(0.5 * nu)
    return np.array(
        [
            c,
            -math.sin(nu),
            half_sin * math.cos(theta),
            half_sin * math.sin(theta),
            -math.cos(0.5 * nu),
        ]
    )


@dataclass
class OracleTrajectory:
    """Integrated trajectory with dense output

    Args:
        times: accepted step times
        states: (n, 5) array of (nu, c, x, y, theta) at times, theta unwrapped
        rtol: relative tolerance used
        atol: absolute tolerance used
        dense: continuous extension of the solution on [0, t_max]
    """

    times: np.ndarray
    states: np.ndarray
    rtol: float
    atol: float
    dense: Callable[[Union[float, np.ndarray]], np.ndarray]

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def at(self, t: Union[float, np.ndarray]) -> np.ndarray:
        """(nu, c, x, y, theta) at t, shape (5,) or (5, len(t))"""
        return self.dense(t)

    def pose(self, t: float, wrap: bool = True) -> Tuple[float, float, float]:
        _, _, x, y, theta = self.dense(t)
        if wrap:
            theta = theta % (2.0 * math.pi)
        return float(x), float(y), float(theta)

    def energies(self) -> np.ndarray:
        return 0.5 * self.states[:, 1] ** 2 - np.cos(self.states[:, 0])


def integrate(
    s0: PendulumState,
    t_max: float,
    base: Tuple[float, float, float] = (0.0, 0.0, 0.0),
    rtol: float = RTOL,
    atol: float = ATOL,
) -> OracleTrajectory:
    """Integrates the Hamiltonian system from (base, s0) over [0, t_max]

    Args:
        s0: initial pendulum state
        t_max: final time, positive
        base: initial pose (x, y, theta)
        rtol: relative tolerance of the integrator
        atol: absolute tolerance of the integrator

    Returns:
        trajectory with dense output

    Raises:
        ValueError: if t_max is not positive
        IntegrationError: if the integrator stops before t_max
    """
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")

    z0 = np.array([s0.nu, s0.c, base[0], base[1], base[2]], dtype=float)
    sol = solve_ivp(
        hamiltonian_rhs,
        (0.0, t_max),
        z0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if sol.status < 0:
        raise IntegrationError(f"Integration failed: {sol.message}", t_fail=float(sol.t[-1]))

    return OracleTrajectory(times=sol.t, states=sol.y.T, rtol=rtol, atol=atol, dense=sol.sol)


def _first_crossing(
    g: Callable[[np.ndarray], np.ndarray], t_start: float, t_end: float, direction: int
) -> Union[float, None]:
    """First t in (t_start, t_end] where g crosses zero in the given direction"""
    n = max(int(math.ceil((t_end - t_start) / _SCAN_STEP)), 2)
    grid = np.linspace(t_start, t_end, n + 1)[1:]
    values = direction * g(grid)
    hits = np.nonzero((values[:-1] < 0.0) & (values[1:] >= 0.0))[0]
    if len(hits) == 0:
        return None
    i = hits[0]
    return brentq(lambda t: float(g(np.array([t]))[0]), grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15)


def pendulum_return_time(s0: PendulumState) -> float:
    """Smallest t > 0 at which the pendulum is back at (nu0, c0)

    Oscillations return to the same nu and c; rotations return once nu has
    advanced by 4pi in the direction of motion.

    Args:
        s0: initial pendulum state of class O or R

    Returns:
        return time, refined to 1e-10

    Raises:
        UnsupportedClassError: for non-periodic classes
        IntegrationError: if no return is found within the horizon cap
    """
    tag = classify(s0)
    if not tag.periodic:
        raise UnsupportedClassError("pendulum_return_time", tag.value)

    horizon = _INITIAL_HORIZON
    t_start = _SCAN_STEP
    while horizon <= _MAX_HORIZON:
        traj = integrate(s0, horizon)

        if tag == GeodesicClass.R:
            sign = 1 if s0.c > 0 else -1
            target = s0.nu + sign * 4.0 * math.pi
            t_ret = _first_crossing(lambda t: traj.at(t)[0] - target, t_start, horizon, sign)
        elif abs(s0.c) >= abs(math.sin(s0.nu)):
            # nu leaves nu0 in the direction of c0 and comes back from the other side
            sign = 1 if s0.c > 0 else -1
            t_ret = _first_crossing(lambda t: traj.at(t)[0] - s0.nu, t_start, horizon, sign)
        else:
            sign = -1 if math.sin(s0.nu) > 0 else 1
            t_ret = _first_crossing(lambda t: traj.at(t)[1] - s0.c, t_start, horizon, sign)

        if t_ret is not None:
            return float(t_ret)
        horizon *= 2.0

    raise IntegrationError("No return to the initial state within the horizon cap", t_fail=horizon)

import math

import numpy as np
import numpy.testing as npt
import pytest

from src.geodesic import Geodesic, Pose
from src.optimality import cut_time
from src.pendulum import PendulumState
from src.symmetry import (
    REFLECTIONS,
    Reflection,
    TrajectorySegment,
    firing_reflection,
    heading_flip,
    is_maxwell_point,
    maxwell_report,
    mirror,
    reflected_geodesic,
)

STATES = [(0.5 * math.pi, 1.0), (1.0, -0.5), (0.0, 3.0), (5.0, -2.5), (4.0 * math.pi - 1.0, 2.0 * math.cos(0.5))]


@pytest.mark.parametrize("reflection", list(Reflection))
@pytest.mark.parametrize("nu, c", STATES)
def test_reflections_are_involutions(reflection, nu, c):
    seg = TrajectorySegment.from_geodesic(Geodesic.from_state(PendulumState(nu, c)), 1.7)
    reflect = REFLECTIONS[reflection]
    assert reflect(reflect(seg)).sup_distance(seg) < 1e-12


@pytest.mark.parametrize("reflection", list(Reflection))
@pytest.mark.parametrize("nu, c", STATES)
def test_reflected_segment_is_a_geodesic(reflection, nu, c):
    base = Pose(0.4, -1.1, 2.0)
    g = Geodesic.from_state(PendulumState(nu, c), base=base)
    duration = 2.3
    image = REFLECTIONS[reflection](TrajectorySegment.from_geodesic(g, duration))
    closed = TrajectorySegment.from_geodesic(reflected_geodesic(g, duration, reflection), duration)
    assert closed.sup_distance(image) < 1e-9


@pytest.mark.parametrize("nu, c", STATES)
def test_mirror_state(nu, c):
    t = np.linspace(0.0, 4.0, 41)
    x, y, theta = Geodesic.from_state(PendulumState(nu, c)).path(t)
    xm, ym, thetam = Geodesic.from_state(mirror(PendulumState(nu, c))).path(t)
    npt.assert_allclose(xm, x, atol=1e-12)
    npt.assert_allclose(ym, -y, atol=1e-12)
    npt.assert_allclose(thetam, -theta, atol=1e-12)


@pytest.mark.parametrize("nu, c", STATES)
def test_heading_flip_traces_the_same_curve(nu, c):
    t = np.linspace(0.0, 4.0, 41)
    x, y, theta = Geodesic.from_state(PendulumState(nu, c)).path(t)
    flipped = Geodesic.from_state(heading_flip(PendulumState(nu, c)), base=Pose(0.0, 0.0, math.pi))
    xf, yf, thetaf = flipped.path(t)
    npt.assert_allclose(xf, x, atol=1e-12)
    npt.assert_allclose(yf, y, atol=1e-12)
    npt.assert_allclose(thetaf, theta + math.pi, atol=1e-12)


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
def test_half_period_of_oscillation_is_a_maxwell_point(c):
    g = Geodesic.from_state(PendulumState(0.5 * math.pi, c))
    t = 0.5 * g.period
    residual, separation = maxwell_report(g, t)[Reflection.T]
    assert residual <= 1e-9
    assert separation > 1e-6
    assert is_maxwell_point(g, t)
    assert firing_reflection(g, t) == Reflection.T


def test_rotating_maxwell_point():
    g = Geodesic.from_state(PendulumState(0.0, 3.0))
    cut = cut_time(g)
    assert 0.5 * g.period < cut.t_cut < g.period
    assert is_maxwell_point(g, cut.t_cut)
    residual, _ = maxwell_report(g, cut.t_cut)[cut.reflection]
    assert residual <= 1e-9


def test_generic_time_is_not_a_maxwell_point():
    g = Geodesic.from_state(PendulumState(0.5 * math.pi, 1.0))
    assert not is_maxwell_point(g, 0.3 * g.period)
    assert firing_reflection(g, 0.3 * g.period) is None
    with pytest.raises(ValueError):
        is_maxwell_point(g, 0.0)

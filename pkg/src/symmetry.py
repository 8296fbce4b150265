"""Reflections of geodesic segments and Maxwell points

A segment q on [0, T] is reflected in the frame of its starting pose:

    S: theta_S(t) = theta(T) - theta(T - t), (x_S, y_S) reflected in the
       middle perpendicular of the chord,
    T: theta_T(t) = theta(T - t) - theta(T), (x_T, y_T) reflected in the
       midpoint of the chord.

Both maps are involutions and send geodesics to geodesics: the S image
starts from the pendulum state (-nu(T), c(T)), the T image from
(nu(T) + 2pi, -c(T)).
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from src.geodesic import ORIGIN, TWO_PI, Geodesic, Pose, wrap_angle
from src.pendulum import PendulumState

MAXWELL_TOL = 1e-9
DISTINCT_TOL = 1e-6
SEGMENT_SAMPLES = 512


class Reflection(str, Enum):
    S = "S"
    T = "T"


@dataclass(frozen=True)
class TrajectorySegment:
    """Densely sampled trajectory on [0, duration]

    Args:
        duration: length T of the time interval
        times: uniform sample times, times[0] = 0 and times[-1] = duration
        x, y: planar samples
        theta: heading samples, unwrapped
    """

    duration: float
    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        if not self.duration > 0.0:
            raise ValueError(f"Segment duration must be positive, got {self.duration}")

    @classmethod
    def from_geodesic(cls, g: Geodesic, duration: float, n: int = SEGMENT_SAMPLES) -> "TrajectorySegment":
        times = np.linspace(0.0, duration, n)
        x, y, theta = g.path(times)
        return cls(duration=duration, times=times, x=x, y=y, theta=theta)

    @property
    def start(self) -> Pose:
        return Pose(self.x[0], self.y[0], self.theta[0])

    @property
    def end(self) -> Pose:
        return Pose(self.x[-1], self.y[-1], self.theta[-1])

    def length(self) -> float:
        """Sub-Riemannian length of the sampled polyline"""
        return float(np.sum(np.sqrt(np.diff(self.x) ** 2 + np.diff(self.y) ** 2 + np.diff(self.theta) ** 2)))

    def sup_distance(self, other: "TrajectorySegment") -> float:
        """Largest pointwise |dx| + |dy| + angdist(dtheta) between equally sampled segments"""
        dtheta = wrap_angle(np.abs(self.theta - other.theta))
        dtheta = np.minimum(dtheta, TWO_PI - dtheta)
        return float(np.max(np.abs(self.x - other.x) + np.abs(self.y - other.y) + dtheta))

    def _local(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        start = self.start
        cos, sin = math.cos(self.theta[0]), math.sin(self.theta[0])
        dx, dy = self.x - start.x, self.y - start.y
        return cos * dx + sin * dy, -sin * dx + cos * dy, self.theta - self.theta[0]

    def _from_local(self, x: np.ndarray, y: np.ndarray, theta: np.ndarray) -> "TrajectorySegment":
        xw, yw = Pose(self.x[0], self.y[0], self.theta[0]).act(x, y)
        return TrajectorySegment(self.duration, self.times, xw, yw, theta + self.theta[0])


def reflect_S(seg: TrajectorySegment) -> TrajectorySegment:
    """Reflection in the middle perpendicular of the chord"""
    x, y, theta = seg._local()
    xr, yr, thr = x[::-1], y[::-1], theta[::-1]
    cos, sin = math.cos(theta[-1]), math.sin(theta[-1])
    return seg._from_local(
        -cos * (x[-1] - xr) - sin * (y[-1] - yr),
        -sin * (x[-1] - xr) + cos * (y[-1] - yr),
        theta[-1] - thr,
    )


def reflect_T(seg: TrajectorySegment) -> TrajectorySegment:
    """Reflection in the midpoint of the chord"""
    x, y, theta = seg._local()
    xr, yr, thr = x[::-1], y[::-1], theta[::-1]
    cos, sin = math.cos(theta[-1]), math.sin(theta[-1])
    return seg._from_local(
        cos * (xr - x[-1]) + sin * (yr - y[-1]),
        -sin * (xr - x[-1]) + cos * (yr - y[-1]),
        thr - theta[-1],
    )


REFLECTIONS = {Reflection.S: reflect_S, Reflection.T: reflect_T}


def reflected_state(g: Geodesic, duration: float, reflection: Reflection) -> PendulumState:
    """Initial pendulum state of the reflected image of g on [0, duration]"""
    s_end = g.state_at(duration)
    if reflection == Reflection.S:
        return PendulumState(-s_end.nu, s_end.c)
    return PendulumState(s_end.nu + 2.0 * math.pi, -s_end.c)


def reflected_geodesic(g: Geodesic, duration: float, reflection: Reflection) -> Geodesic:
    """The reflected image of g on [0, duration] as a geodesic from the same base"""
    return Geodesic.from_state(reflected_state(g, duration, reflection), base=g.base)


def heading_flip(s: PendulumState) -> PendulumState:
    """State tracing the same planar curve with theta + pi and u -> -u"""
    return PendulumState(-s.nu, -s.c)


def mirror(s: PendulumState) -> PendulumState:
    """State of the image under (x, y, theta) -> (x, -y, -theta)"""
    return PendulumState(2.0 * math.pi - s.nu, -s.c)


def maxwell_residual_s(g: Geodesic, t: np.ndarray) -> np.ndarray:
    """Zero where q(t) is fixed by S: x cos(theta/2) + y sin(theta/2) in the start frame"""
    x, y, theta = g.rebased(ORIGIN).path(t)
    return x * np.cos(0.5 * theta) + y * np.sin(0.5 * theta)


def maxwell_residual_t(g: Geodesic, t: np.ndarray) -> np.ndarray:
    """Zero where q(t) is fixed by T: cos(theta/2) with theta unwrapped in the start frame"""
    _, _, theta = g.rebased(ORIGIN).path(t)
    return np.cos(0.5 * theta)


def maxwell_report(
    g: Geodesic, t: float, n: int = SEGMENT_SAMPLES
) -> Dict[Reflection, Tuple[float, float]]:
    """Endpoint residual and sup-distance to the image, per reflection"""
    seg = TrajectorySegment.from_geodesic(g, t, n)
    report = {}
    for reflection, reflect in REFLECTIONS.items():
        image = reflect(seg)
        report[reflection] = (seg.end.distance(image.end), seg.sup_distance(image))
    return report


def is_maxwell_point(g: Geodesic, t: float, tol: float = MAXWELL_TOL, distinct: float = DISTINCT_TOL) -> bool:
    """True if a reflection of g on [0, t] ends at q(t) along a different curve

    Args:
        g: geodesic
        t: time, positive
        tol: endpoint coincidence tolerance
        distinct: sup-norm separation required between g and its image

    Returns:
        whether q(t) is a Maxwell point for S or T
    """
    if not t > 0.0:
        raise ValueError(f"Maxwell time must be positive, got {t}")
    return any(
        residual <= tol and separation > distinct for residual, separation in maxwell_report(g, t).values()
    )


def firing_reflection(g: Geodesic, t: float, tol: float = MAXWELL_TOL, distinct: float = DISTINCT_TOL):
    """The reflection realizing a Maxwell point at t, None if there is none"""
    for reflection, (residual, separation) in maxwell_report(g, t).items():
        if residual <= tol and separation > distinct:
            return reflection
    return None

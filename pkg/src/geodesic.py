"""Closed-form geodesics of the mechanical problem on SE(2)

Geodesics are evaluated from the origin and then moved to their base pose
by left multiplication. With w(t) = sin(nu/2) + i c/2, every class obeys

    x + iy = (int_0^t sin(nu/2)**2 ds + i (cos(nu0/2) - cos(nu/2))) / w(0)

while theta is integrated in closed form through the Jacobi amplitude, so it
stays continuous (unwrapped) along the curve.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from src.elliptic import jacobi_all
from src.exceptions import UnsupportedClassError
from src.pendulum import (
    DELTA_CLASS,
    Covector,
    EllipticParams,
    GeodesicClass,
    PendulumState,
    check_level,
    classify,
    covector_to_pendulum,
    fit_elliptic_params,
    pendulum_period,
)

TWO_PI = 2.0 * math.pi
# Smallest relative tolerance brentq accepts
BRENTQ_RTOL = 4.0 * np.finfo(float).eps

ArrayLike = Union[float, np.ndarray]


def wrap_angle(theta: ArrayLike) -> ArrayLike:
    """Wraps angles into [0, 2pi)"""
    return np.mod(theta, TWO_PI) if isinstance(theta, np.ndarray) else float(theta) % TWO_PI


def angdist(a: float, b: float) -> float:
    """Distance on the circle, min(|a - b|, 2pi - |a - b|)"""
    d = wrap_angle(abs(float(a) - float(b)))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Pose:
    """Element (x, y, theta) of SE(2), theta wrapped into [0, 2pi)"""

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    def compose(self, other: "Pose") -> "Pose":
        """Left multiplication self * other"""
        cos, sin = math.cos(self.theta), math.sin(self.theta)
        return Pose(
            self.x + cos * other.x - sin * other.y,
            self.y + sin * other.x + cos * other.y,
            self.theta + other.theta,
        )

    def inverse(self) -> "Pose":
        cos, sin = math.cos(self.theta), math.sin(self.theta)
        return Pose(-cos * self.x - sin * self.y, sin * self.x - cos * self.y, -self.theta)

    def act(self, x: ArrayLike, y: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """Rototranslates planar points"""
        cos, sin = math.cos(self.theta), math.sin(self.theta)
        return self.x + cos * x - sin * y, self.y + sin * x + cos * y

    def distance(self, other: "Pose") -> float:
        """Endpoint residual |dx| + |dy| + angdist(dtheta)"""
        return abs(self.x - other.x) + abs(self.y - other.y) + angdist(self.theta, other.theta)

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.x, self.y, self.theta


ORIGIN = Pose()


@dataclass(frozen=True)
class CurveSample:
    t: float
    pose: Pose
    curvature: float


@dataclass(frozen=True)
class Geodesic:
    """Geodesic parametrized by sub-Riemannian arclength

    Args:
        base: pose at t = 0
        state0: pendulum state at t = 0
        tag: geodesic class of state0
        params: elliptic parameters, None for classes S and U
    """

    base: Pose
    state0: PendulumState
    tag: GeodesicClass
    params: Optional[EllipticParams] = None

    @classmethod
    def from_state(cls, state0: PendulumState, base: Pose = ORIGIN) -> "Geodesic":
        tag = classify(state0)
        params = fit_elliptic_params(state0) if tag.elliptic else None
        return cls(base=base, state0=state0, tag=tag, params=params)

    @classmethod
    def from_covector(cls, base: Pose, p: Covector) -> "Geodesic":
        return cls.from_state(covector_to_pendulum(base.theta, p), base=base)

    @cached_property
    def period(self) -> float:
        return pendulum_period(self.state0)

    @cached_property
    def _phase_values(self) -> Tuple[float, ...]:
        sn, cn, dn, am, eps = jacobi_all(self.params.phi, self.params.k)
        return float(sn[0]), float(cn[0]), float(dn[0]), float(am[0]), float(eps[0])

    def controls(self, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """sin(nu/2), cos(nu/2) and c along the geodesic

        The planar control is u = sin(nu/2), the angular one v = -cos(nu/2).
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if not self.tag.elliptic:
            half_sin, half_cos = self._equilibrium_controls()
            return np.full_like(t, half_sin), np.full_like(t, half_cos), np.zeros_like(t)

        k, phi = self.params.k, self.params.phi
        sig_nu, sig_c = self.params.sigma_nu, self.params.sigma_c
        if self.tag == GeodesicClass.O:
            sn, cn, dn, _, _ = jacobi_all(phi + t, k)
            return sig_nu * k * sn, sig_nu * dn, 2.0 * k * cn
        if self.tag == GeodesicClass.R:
            sn, cn, dn, _, _ = jacobi_all(phi + t / k, k)
            return sig_c * sn, cn, 2.0 * sig_c / k * dn
        tau = phi + t
        sech = 1.0 / np.cosh(tau)
        return sig_nu * sig_c * np.tanh(tau), sig_nu * sech, 2.0 * sig_c * sech

    def state_at(self, t: float) -> PendulumState:
        half_sin, half_cos, c = self.controls(t)
        return PendulumState(2.0 * math.atan2(half_sin[0], half_cos[0]), c[0])

    def _equilibrium_controls(self) -> Tuple[float, float]:
        """sin(nu/2) and cos(nu/2) of the equilibrium an S or U state stands for"""
        s0 = self.state0
        if self.tag == GeodesicClass.S:
            return 0.0, math.copysign(1.0, s0.half_cos)
        return math.copysign(1.0, s0.half_sin), 0.0

    def _origin_path(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        s0 = self.state0
        if not self.tag.elliptic:
            half_sin, half_cos = self._equilibrium_controls()
            return half_sin * t, np.zeros_like(t), -half_cos * t

        k, phi = self.params.k, self.params.phi
        sig_nu, sig_c = self.params.sigma_nu, self.params.sigma_c

        if self.tag == GeodesicClass.O:
            _, _, _, am_phi, eps_phi = self._phase_values
            sn, cn, dn, am, eps = jacobi_all(phi + t, k)
            half_cos = sig_nu * dn
            # integral of k**2 sn**2 = integral of (1 - dn**2)
            sin_sq = t + eps_phi - eps
            theta = -sig_nu * (am - am_phi)
        elif self.tag == GeodesicClass.R:
            sn_phi, _, _, _, eps_phi = self._phase_values
            sn, cn, dn, am, eps = jacobi_all(phi + t / k, k)
            half_cos = cn
            sin_sq = (t / k + eps_phi - eps) / k
            theta = -(np.arcsin(k * sn) - math.asin(k * sn_phi))
        else:
            tau = phi + t
            half_cos = sig_nu / np.cosh(tau)
            sin_sq = t - (np.tanh(tau) - math.tanh(phi))
            theta = -sig_nu * (np.arctan(np.sinh(tau)) - math.atan(math.sinh(phi)))

        w0 = complex(s0.half_sin, 0.5 * s0.c)
        z = (sin_sq + 1j * (s0.half_cos - half_cos)) / w0
        return z.real, z.imag, theta

    def path(self, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """World-frame x, y and unwrapped theta at times t"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x, y, theta = self._origin_path(t)
        xw, yw = self.base.act(x, y)
        return xw, yw, self.base.theta + theta

    def eval(self, t: float) -> Pose:
        """Pose reached at sub-Riemannian time t"""
        if t < 0.0:
            raise ValueError(f"Geodesic time must be non-negative, got {t}")
        if t == 0.0:
            return self.base
        x, y, theta = self.path(t)
        return Pose(x[0], y[0], theta[0])

    def rebased(self, base: Pose) -> "Geodesic":
        return Geodesic(base=base, state0=self.state0, tag=self.tag, params=self.params)


def exponential_map(base: Pose, p: Covector, t: float) -> Pose:
    """Endpoint at time t of the geodesic leaving base with covector p

    Args:
        base: initial pose
        p: initial covector, on the level H = 1/2
        t: sub-Riemannian time, non-negative

    Returns:
        pose at time t

    Raises:
        OffLevelCovectorError: if p is off the unit level
    """
    check_level(base.theta, p)
    return Geodesic.from_covector(base, p).eval(t)


def curvature(s: PendulumState) -> float:
    """Planar curvature -cot(nu/2), a signed infinity at cusps"""
    half_sin, half_cos = s.half_sin, s.half_cos
    if abs(half_sin) <= DELTA_CLASS:
        return math.copysign(math.inf, -half_cos * (half_sin if half_sin != 0.0 else 1.0))
    return -half_cos / half_sin


def curvature_along(half_sin: np.ndarray, half_cos: np.ndarray) -> np.ndarray:
    singular = np.abs(half_sin) <= DELTA_CLASS
    safe = np.where(singular, 1.0, half_sin)
    signed = np.where(half_sin == 0.0, 1.0, half_sin)
    return np.where(singular, np.copysign(np.inf, -half_cos * signed), -half_cos / safe)


def _scan_step(g: Geodesic, t_max: float) -> float:
    if g.tag.periodic:
        return g.period / 64.0
    return t_max / 256.0


def _sign_changes(fn: Callable[[np.ndarray], np.ndarray], t_max: float, step: float) -> List[float]:
    """Sorted zeros of fn in (0, t_max) where fn changes sign, refined by bisection"""
    n = max(int(math.ceil(t_max / step)), 2)
    grid = np.linspace(0.0, t_max, n + 1)
    values = fn(grid)
    roots = []
    for i in np.nonzero(values[:-1] * values[1:] <= 0.0)[0]:
        a, b = grid[i], grid[i + 1]
        if values[i] == 0.0 and values[i + 1] == 0.0:
            continue
        if values[i] == 0.0:
            root = a
        elif values[i + 1] == 0.0:
            root = b
        else:
            root = brentq(lambda t: float(fn(np.array([t]))[0]), a, b, xtol=1e-12, rtol=BRENTQ_RTOL)
        if not roots or root - roots[-1] > 1e-10:
            roots.append(float(root))

    # a zero sitting on t = 0 or t = t_max is not a sign change inside the interval
    scale = max(1.0, t_max) * 1e-12
    return [r for r in roots if scale < r < t_max - scale]


def cusp_times(g: Geodesic, t_max: float) -> List[float]:
    """Times in (0, t_max) where the planar control sin(nu/2) changes sign

    Raises:
        UnsupportedClassError: for class S, whose cusps are angular
    """
    if t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if g.tag == GeodesicClass.S:
        raise UnsupportedClassError("cusp_times", g.tag.value)
    if g.tag == GeodesicClass.U:
        return []
    return _sign_changes(lambda t: g.controls(t)[0], t_max, _scan_step(g, t_max))


def inflection_times(g: Geodesic, t_max: float) -> List[float]:
    """Times in (0, t_max) where the curvature changes sign through zero

    Raises:
        UnsupportedClassError: for class S
    """
    if t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if g.tag == GeodesicClass.S:
        raise UnsupportedClassError("inflection_times", g.tag.value)
    if g.tag != GeodesicClass.R:
        # cos(nu/2) keeps its sign off the rotating family
        return []
    return _sign_changes(lambda t: g.controls(t)[1], t_max, _scan_step(g, t_max))


def sample_curve(g: Geodesic, t_max: float, n: int) -> List[CurveSample]:
    """n uniformly spaced samples (t, pose, curvature) on [0, t_max]"""
    if n < 2:
        raise ValueError(f"At least 2 samples are needed, got {n}")
    t = np.linspace(0.0, t_max, n)
    x, y, theta = g.path(t)
    half_sin, half_cos, _ = g.controls(t)
    kappa = curvature_along(half_sin, half_cos)
    return [
        CurveSample(float(t[i]), Pose(x[i], y[i], theta[i]), float(kappa[i])) for i in range(n)
    ]

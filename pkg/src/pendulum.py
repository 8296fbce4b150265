"""Covector cylinder coordinates and the pendulum behind the geodesic flow

The vertical part of the Hamiltonian system is the pendulum
nu'' = -sin(nu) with nu on the double covering R / 4piZ and c = nu'.
"""
import math
from dataclasses import dataclass
from enum import Enum

from src.elliptic import complete_integrals, incomplete_first_kind
from src.exceptions import OffLevelCovectorError, UnsupportedClassError

# Tolerance band for the equilibria and the separatrix
DELTA_CLASS = 1e-10
# Neighbourhood of the unstable equilibria nu = pi, 3pi taken as the line U
DELTA_SADDLE = 1e-8
# Allowed |2H - 1| for a covector to count as being on the unit level
LEVEL_TOL = 1e-9

FOUR_PI = 4.0 * math.pi


class GeodesicClass(str, Enum):
    S = "S"
    U = "U"
    R = "R"
    O = "O"
    SEP = "Sep"

    @property
    def periodic(self) -> bool:
        return self in (GeodesicClass.R, GeodesicClass.O)

    @property
    def elliptic(self) -> bool:
        return self in (GeodesicClass.R, GeodesicClass.O, GeodesicClass.SEP)


@dataclass(frozen=True)
class Covector:
    p1: float
    p2: float
    p3: float


@dataclass(frozen=True)
class PendulumState:
    """Point (nu, c) of the covector cylinder, nu wrapped into [0, 4pi)"""

    nu: float
    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", float(self.nu) % FOUR_PI)
        object.__setattr__(self, "c", float(self.c))

    @property
    def half_sin(self) -> float:
        return math.sin(0.5 * self.nu)

    @property
    def half_cos(self) -> float:
        return math.cos(0.5 * self.nu)

    def reversed(self) -> "PendulumState":
        return PendulumState(self.nu, -self.c)


@dataclass(frozen=True)
class EllipticParams:
    """Modulus, initial phase and sign factors of an elliptic closed form

    Args:
        k: elliptic modulus
        phi: phase at t = 0 (elliptic argument for O and R, hyperbolic for Sep)
        sigma_c: sign of the initial angular rate c (+1 when c = 0)
        sigma_nu: sign of cos(nu / 2) at t = 0 (+1 when it vanishes)
    """

    k: float
    phi: float
    sigma_c: int
    sigma_nu: int


def _sign(value: float) -> int:
    return -1 if value < 0.0 else 1


def hamiltonian(theta: float, p: Covector) -> float:
    """Value of H = ((p1 cos theta + p2 sin theta)**2 + p3**2) / 2"""
    h1 = p.p1 * math.cos(theta) + p.p2 * math.sin(theta)
    return 0.5 * (h1 ** 2 + p.p3 ** 2)


def check_level(theta: float, p: Covector, tol: float = LEVEL_TOL) -> None:
    deviation = abs(2.0 * hamiltonian(theta, p) - 1.0)
    if deviation > tol:
        raise OffLevelCovectorError(deviation)


def covector_to_pendulum(theta: float, p: Covector) -> PendulumState:
    """Maps an initial covector on H = 1/2 to cylinder coordinates

    Args:
        theta: heading of the base point
        p: covector at the base point

    Returns:
        state with sin(nu/2) = p1 cos theta + p2 sin theta, cos(nu/2) = -p3,
        c = 2 (p2 cos theta - p1 sin theta)

    Raises:
        OffLevelCovectorError: if |2H - 1| exceeds LEVEL_TOL
    """
    check_level(theta, p)
    half_sin = p.p1 * math.cos(theta) + p.p2 * math.sin(theta)
    half_cos = -p.p3
    c = 2.0 * (p.p2 * math.cos(theta) - p.p1 * math.sin(theta))
    return PendulumState(2.0 * math.atan2(half_sin, half_cos), c)


def pendulum_to_covector(theta: float, s: PendulumState) -> Covector:
    half_sin, half_c = s.half_sin, 0.5 * s.c
    return Covector(
        p1=half_sin * math.cos(theta) - half_c * math.sin(theta),
        p2=half_sin * math.sin(theta) + half_c * math.cos(theta),
        p3=-s.half_cos,
    )


def energy(s: PendulumState) -> float:
    return 0.5 * s.c ** 2 - math.cos(s.nu)


def classify(s: PendulumState, tol: float = DELTA_CLASS) -> GeodesicClass:
    """Geodesic class of a pendulum state

    Equalities are tested within the band tol; states close to, but outside,
    the band get the generic class O or R. The unstable equilibria get the
    wider band DELTA_SADDLE in both coordinates.

    States inside a band evaluate as the equilibrium or separatrix they are
    snapped onto. Near the saddle the true motion leaves that curve like
    d exp(t) for an offset d, so the closed form of a snapped state tracks
    the flow only while d exp(t) stays small.
    """
    if abs(s.c) <= tol and abs(s.half_sin) <= tol:
        return GeodesicClass.S
    saddle = max(tol, DELTA_SADDLE)
    if abs(s.c) <= saddle and abs(s.half_cos) <= saddle:
        return GeodesicClass.U
    e = energy(s)
    if abs(e - 1.0) <= tol:
        return GeodesicClass.SEP
    return GeodesicClass.O if e < 1.0 else GeodesicClass.R


def modulus(s: PendulumState) -> float:
    """Elliptic modulus of the pendulum motion

    k**2 = (1 + E) / 2 while oscillating, k**2 = 2 / (1 + E) while rotating,
    1 on the separatrix.
    """
    tag = classify(s)
    if tag == GeodesicClass.O:
        # (1 + E) / 2 = sin(nu/2)**2 + c**2 / 4
        return min(math.hypot(s.half_sin, 0.5 * s.c), 1.0)
    if tag == GeodesicClass.R:
        return min(math.sqrt(2.0 / (1.0 + energy(s))), 1.0)
    if tag == GeodesicClass.SEP:
        return 1.0
    raise UnsupportedClassError("modulus", tag.value)


def pendulum_period(s: PendulumState) -> float:
    """Period of the pendulum on the double covering

    4 K(k) while oscillating; 4 k K(k) while rotating, the time in which nu
    advances by 4pi (cusps are 2 k K(k) apart). +inf for S, U and Sep.
    """
    tag = classify(s)
    if not tag.periodic:
        return math.inf
    k = modulus(s)
    big_k, _ = complete_integrals(k)
    if tag == GeodesicClass.O:
        return 4.0 * big_k
    return 4.0 * k * big_k


def fit_elliptic_params(s: PendulumState) -> EllipticParams:
    """Modulus, phase and signs of the closed form through s at t = 0

    The phase is the inverse amplitude of the t = 0 conditions, so the
    fitted closed form starts exactly at (nu0, c0).

    Args:
        s: initial pendulum state

    Returns:
        elliptic parameters of the matching closed form

    Raises:
        UnsupportedClassError: for classes S and U
    """
    tag = classify(s)
    if not tag.elliptic:
        raise UnsupportedClassError("fit_elliptic_params", tag.value)

    sigma_nu = _sign(s.half_cos)
    sigma_c = _sign(s.c)
    k = modulus(s)

    if tag == GeodesicClass.O:
        # sin(nu/2) = sigma_nu k sn, c = 2 k cn
        amplitude = math.atan2(sigma_nu * s.half_sin, 0.5 * s.c)
        phi = float(incomplete_first_kind(amplitude, k))
    elif tag == GeodesicClass.R:
        # sin(nu/2) = sigma_c sn, cos(nu/2) = cn
        amplitude = math.atan2(sigma_c * s.half_sin, s.half_cos)
        phi = float(incomplete_first_kind(amplitude, k))
    else:
        # sin(nu/2) = sigma_nu sigma_c tanh
        ratio = sigma_nu * sigma_c * s.half_sin
        phi = math.atanh(max(min(ratio, 1.0 - 1e-16), -1.0 + 1e-16))

    return EllipticParams(k=k, phi=phi, sigma_c=sigma_c, sigma_nu=sigma_nu)

"""Boundary-value problems for the mechanical problem and the curve problem

Targets are moved to the origin frame and to xi = 1 before shooting.
Shooting unknowns are the initial pendulum state (nu0, c0) and the
duration T; a stratified multi-start sweep over the covector cylinder picks
the starts that least_squares refines.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import least_squares

from src.exceptions import CutSearchError, ShootingError
from src.geodesic import ORIGIN, TWO_PI, Geodesic, Pose, angdist, cusp_times
from src.optimality import CutInfo, cut_time
from src.pendulum import GeodesicClass, PendulumState
from src.symmetry import (
    DISTINCT_TOL,
    REFLECTIONS,
    TrajectorySegment,
    heading_flip,
    reflected_geodesic,
)

# Equilibria (nu, c) of the pendulum: rotations in place and straight lines
EQUILIBRIA = ((0.0, 0.0), (TWO_PI, 0.0), (math.pi, 0.0), (3.0 * math.pi, 0.0))


@dataclass(frozen=True)
class ShootingConfig:
    """Multi-start shooting budget and tolerances

    Args:
        n_nu: number of nu0 strata on [0, 4pi)
        n_c: number of c0 strata, sinh-spaced on [-c_max, c_max]
        c_max: largest initial angular rate sampled
        n_time: duration guesses per start in the coarse sweep
        n_refine: starts handed to least_squares
        max_nfev: evaluation budget of one refinement
        tol: accepted endpoint residual |dx| + |dy| + angdist(dtheta)
        cut_slack: allowed excess of T over the cut time
        twin_tol: length gap under which a second minimizer is kept
        boundary_tol: time tolerance excluding cusps at the endpoints
        marginal_tol: cusps closer than this to an endpoint flag the verdict
        snap_tol: refined states this close to an equilibrium are snapped onto it
        seed: seed of the stratified jitter
    """

    n_nu: int = 32
    n_c: int = 32
    c_max: float = 8.0
    n_time: int = 48
    n_refine: int = 24
    max_nfev: int = 200
    tol: float = 1e-8
    cut_slack: float = 1e-9
    twin_tol: float = 1e-8
    boundary_tol: float = 1e-9
    marginal_tol: float = 1e-6
    snap_tol: float = 1e-6
    seed: int = 0


@dataclass(frozen=True)
class BoundaryPair:
    q_in: Pose
    q_fin: Pose
    xi: float = 1.0

    def __post_init__(self) -> None:
        if not self.xi > 0.0:
            raise ValueError(f"xi must be positive, got {self.xi}")


@dataclass
class Minimizer:
    """Minimizing geodesic of a boundary pair

    The geodesic lives in the reduced problem (origin start, xi = 1); frame
    and xi map it back onto the original boundary pair.

    Args:
        geodesic: reduced geodesic from the origin
        duration: sub-Riemannian time T
        length: cost of the minimizer, equal to T
        cusp_times_internal: cusp times in (0, T) away from the endpoints
        cut: cut information of the geodesic
        frame: initial pose q_in of the original pair
        xi: weight of the original pair
        twin: second minimizer of equal length, if any
        twin_reflection: reflection mapping this minimizer onto its twin
    """

    geodesic: Geodesic
    duration: float
    length: float
    cusp_times_internal: List[float]
    cut: Optional[CutInfo] = None
    frame: Pose = ORIGIN
    xi: float = 1.0
    twin: Optional["Minimizer"] = None
    twin_reflection: Optional[str] = None

    @property
    def tag(self) -> GeodesicClass:
        return self.geodesic.tag

    @property
    def has_internal_cusp(self) -> bool:
        return len(self.cusp_times_internal) > 0

    @property
    def forward(self) -> bool:
        """Planar control positive between the endpoints"""
        if self.duration == 0.0:
            return True
        half_sin, _, _ = self.geodesic.controls(0.5 * self.duration)
        return bool(half_sin[0] > 0.0)

    def path(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """World-frame curve of the original problem"""
        x, y, theta = self.geodesic.path(t)
        x, y = self.frame.act(x / self.xi, y / self.xi)
        return x, y, theta + self.frame.theta

    def endpoint(self) -> Pose:
        if self.duration == 0.0:
            return self.frame
        x, y, theta = self.path(np.array([self.duration]))
        return Pose(x[0], y[0], theta[0])

    def minimizers(self) -> List["Minimizer"]:
        return [self] if self.twin is None else [self, self.twin]


class Verdict(str, Enum):
    EXISTS = "Exists"
    NO_SOLUTION_INTERNAL_CUSP = "NoSolutionInternalCusp"
    NO_SOLUTION_ANGULAR_CUSP = "NoSolutionAngularCusp"


@dataclass
class ExistenceVerdict:
    """Existence verdict for the curve problem

    Args:
        tag: verdict
        witness: minimizer of the mechanical problem the verdict rests on
        cusp_times: internal cusp times of the witness
        boundary_marginal: a cusp lies within marginal_tol of an endpoint
        backward: the cusp-free minimizers only run against their heading
    """

    tag: Verdict
    witness: Minimizer
    cusp_times: List[float] = field(default_factory=list)
    boundary_marginal: bool = False
    backward: bool = False

    @property
    def exists(self) -> bool:
        return self.tag == Verdict.EXISTS


@dataclass
class SolveReport:
    minimizers: List[Minimizer]
    length: float
    cusp_times: List[float]
    verdict: ExistenceVerdict


def normalize_to_origin(bp: BoundaryPair) -> Tuple[Pose, Pose]:
    """Moves q_in to the origin

    Returns:
        (q_in^-1 q_fin, q_in); left multiplication by q_in maps solutions back
    """
    return bp.q_in.inverse().compose(bp.q_fin), bp.q_in


def denormalize(pose: Pose, frame: Pose) -> Pose:
    return frame.compose(pose)


def _dilate(pose: Pose, factor: float) -> Pose:
    return Pose(factor * pose.x, factor * pose.y, pose.theta)


def reduce_xi(bp: BoundaryPair) -> BoundaryPair:
    """Equivalent pair at xi = 1

    Positions are dilated by xi, angles kept; a curve of the original pair
    and its dilation have equal costs for their respective weights.
    """
    return BoundaryPair(_dilate(bp.q_in, bp.xi), _dilate(bp.q_fin, bp.xi), 1.0)


def expand_xi(bp: BoundaryPair, xi: float) -> BoundaryPair:
    """Inverse of reduce_xi"""
    return BoundaryPair(_dilate(bp.q_in, 1.0 / xi), _dilate(bp.q_fin, 1.0 / xi), xi)


def mec_cost(g: Geodesic, T: float, xi: float = 1.0, scale: float = 1.0) -> float:
    """Cost of the curve scale * g on [0, T] for weight xi

    The dilated curve has planar control scale * u and the same v.
    """
    if T == 0.0:
        return 0.0

    def integrand(t: float) -> float:
        half_sin, half_cos, _ = g.controls(t)
        return math.sqrt((xi * scale * half_sin[0]) ** 2 + half_cos[0] ** 2)

    value, _ = quad(integrand, 0.0, T, limit=400, epsabs=1e-13, epsrel=1e-13)
    return value


def plane_length(g: Geodesic, T: float) -> float:
    """Length of the planar projection on [0, T]"""
    if T == 0.0:
        return 0.0
    value, _ = quad(lambda t: abs(g.controls(t)[0][0]), 0.0, T, limit=400, epsabs=1e-13, epsrel=1e-13)
    return value


def length_upper_bound(target: Pose) -> float:
    """Cost of turning in place, driving straight and turning again"""
    d = math.hypot(target.x, target.y)
    if d == 0.0:
        return min(target.theta, TWO_PI - target.theta)
    heading = math.atan2(target.y, target.x)
    best = math.inf
    for drive in (heading, heading + math.pi):
        best = min(best, angdist(0.0, drive) + d + angdist(drive, target.theta))
    return best


def _wrapped(delta: np.ndarray) -> np.ndarray:
    return (delta + math.pi) % TWO_PI - math.pi


def _residual(nu: float, c: float, T: float, target: Pose) -> np.ndarray:
    g = Geodesic.from_state(PendulumState(nu, c))
    x, y, theta = g.path(T)
    return np.array([x[0] - target.x, y[0] - target.y, _wrapped(theta[0] - target.theta)])


def _seeds(config: ShootingConfig) -> np.ndarray:
    """Stratified (nu0, c0) starts with seeded jitter, plus the equilibria"""
    rng = np.random.default_rng(config.seed)
    nu = (np.arange(config.n_nu) + rng.uniform(0.0, 1.0, config.n_nu)) * (2.0 * TWO_PI / config.n_nu)
    strata = np.linspace(-1.0, 1.0, config.n_c)
    strata = strata + rng.uniform(-0.5, 0.5, config.n_c) * (2.0 / max(config.n_c - 1, 1))
    c = config.c_max * np.sinh(2.0 * strata) / math.sinh(2.0)
    grid = np.stack(np.meshgrid(nu, c, indexing="ij"), axis=-1).reshape(-1, 2)
    return np.concatenate([np.array(EQUILIBRIA), grid], axis=0)


def _coarse_sweep(target: Pose, bound: float, config: ShootingConfig) -> List[Tuple[float, float, float]]:
    """Best (nu0, c0, T) starts by endpoint residual over a grid of durations"""
    times = np.linspace(0.0, bound, config.n_time + 1)[1:]
    scored = []
    for nu, c in _seeds(config):
        x, y, theta = Geodesic.from_state(PendulumState(nu, c)).path(times)
        residual = np.abs(x - target.x) + np.abs(y - target.y) + np.abs(_wrapped(theta - target.theta))
        for j in np.argsort(residual)[:2]:
            scored.append((float(residual[j]), float(nu), float(c), float(times[j])))

    scored.sort(key=lambda item: item[0])
    return [(nu, c, T) for _, nu, c, T in scored[: config.n_refine]]


def _refine(start: Tuple[float, float, float], target: Pose, bound: float, config: ShootingConfig):
    nu0, c0, T0 = start
    result = least_squares(
        lambda z: _residual(z[0], z[1], z[2], target),
        np.array([nu0, c0, T0]),
        jac="3-point",
        bounds=([-np.inf, -np.inf, 1e-12], [np.inf, np.inf, 1.5 * bound + 1.0]),
        method="trf",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=config.max_nfev,
    )
    nu, c, T = result.x
    residual = float(np.sum(np.abs(_residual(nu, c, T, target))))
    return _snap(PendulumState(nu, c), float(T), residual, target, config)


def _snap(state: PendulumState, T: float, residual: float, target: Pose, config: ShootingConfig):
    """Moves a refined state onto a nearby equilibrium if that still reaches the target"""
    for nu_eq, c_eq in EQUILIBRIA:
        offset = abs((state.nu - nu_eq + TWO_PI) % (2.0 * TWO_PI) - TWO_PI)
        if offset > config.snap_tol or abs(state.c - c_eq) > config.snap_tol:
            continue
        snapped = float(np.sum(np.abs(_residual(nu_eq, c_eq, T, target))))
        if snapped <= config.tol:
            return PendulumState(nu_eq, c_eq), T, snapped
    return state, T, residual


def _internal_cusps(g: Geodesic, T: float, config: ShootingConfig) -> List[float]:
    if g.tag in (GeodesicClass.S, GeodesicClass.U) or T == 0.0:
        return []
    return [t for t in cusp_times(g, T) if config.boundary_tol < t < T - config.boundary_tol]


def _make_minimizer(g: Geodesic, T: float, cut: CutInfo, config: ShootingConfig) -> Minimizer:
    return Minimizer(geodesic=g, duration=T, length=T, cusp_times_internal=_internal_cusps(g, T, config), cut=cut)


def _same_curve(a: Geodesic, b: Geodesic, T: float) -> bool:
    seg_a = TrajectorySegment.from_geodesic(a, T)
    seg_b = TrajectorySegment.from_geodesic(b, T)
    return seg_a.sup_distance(seg_b) <= DISTINCT_TOL


def _twin_reflection(primary: Minimizer, twin: Minimizer) -> Optional[str]:
    seg = TrajectorySegment.from_geodesic(primary.geodesic, primary.duration)
    other = TrajectorySegment.from_geodesic(twin.geodesic, twin.duration)
    for reflection, reflect in REFLECTIONS.items():
        if reflect(seg).sup_distance(other) <= 1e3 * DISTINCT_TOL:
            return reflection.value
    return None


def _rotation_minimizers(target: Pose, config: ShootingConfig) -> List[Minimizer]:
    """Pure rotations in place: counter-clockwise from (2pi, 0), clockwise from (0, 0)"""
    turns = [(PendulumState(TWO_PI, 0.0), target.theta), (PendulumState(0.0, 0.0), TWO_PI - target.theta)]
    best = min(T for _, T in turns)
    found = []
    for state, T in turns:
        if T - best <= config.twin_tol:
            g = Geodesic.from_state(state)
            found.append(_make_minimizer(g, T, cut_time(g), config))
    return found


def _shoot(target: Pose, config: ShootingConfig) -> List[Minimizer]:
    logger = logging.getLogger()
    bound = length_upper_bound(target)
    starts = _coarse_sweep(target, bound, config)
    logger.debug(f"Refining {len(starts)} starts, length bound {bound:.6f}")

    survivors: List[Minimizer] = []
    best_residual = math.inf
    for start in starts:
        state, T, residual = _refine(start, target, bound, config)
        best_residual = min(best_residual, residual)
        if residual > config.tol:
            continue
        g = Geodesic.from_state(state)
        try:
            cut = cut_time(g)
        except CutSearchError as e:
            logger.debug(f"Discarding candidate without cut time: {e}")
            continue
        if T > cut.t_cut + config.cut_slack:
            continue
        survivors.append(_make_minimizer(g, T, cut, config))

    logger.debug(f"{len(survivors)} refined starts survive the cut filter")
    if not survivors:
        raise ShootingError("Multi-start shooting exhausted its budget", best_residual)

    survivors.sort(key=lambda m: m.length)
    primary = survivors[0]
    found = [primary]

    # a minimizer ending at its own Maxwell point has the reflected image as twin
    cut = primary.cut
    if cut.reflection is not None and abs(primary.duration - cut.t_cut) <= config.twin_tol:
        g = reflected_geodesic(primary.geodesic, primary.duration, cut.reflection)
        found.append(_make_minimizer(g, primary.duration, cut_time(g), config))

    for other in survivors[1:]:
        if other.length - primary.length > config.twin_tol or len(found) == 2:
            break
        if not _same_curve(other.geodesic, primary.geodesic, primary.duration):
            found.append(other)

    return found[:2]


def solve_pmec(bp: BoundaryPair, config: ShootingConfig = ShootingConfig()) -> Minimizer:
    """Minimizers of the mechanical problem between two poses

    Args:
        bp: boundary pair
        config: shooting budget and tolerances

    Returns:
        the minimizer of least length; a second one of equal length is
        attached as its twin

    Raises:
        ShootingError: if no start converges below the residual tolerance
    """
    logger = logging.getLogger()
    reduced = reduce_xi(bp)
    target, _ = normalize_to_origin(reduced)

    if target.distance(ORIGIN) <= 1e-14:
        g = Geodesic.from_state(PendulumState(TWO_PI, 0.0))
        found = [Minimizer(geodesic=g, duration=0.0, length=0.0, cusp_times_internal=[], cut=cut_time(g))]
    elif math.hypot(target.x, target.y) <= 1e-14:
        found = _rotation_minimizers(target, config)
    else:
        found = _shoot(target, config)

    for m in found:
        m.frame = bp.q_in
        m.xi = bp.xi

    primary = found[0]
    if len(found) == 2:
        primary.twin = found[1]
        primary.twin_reflection = _twin_reflection(primary, found[1])
        if primary.twin_reflection is None and primary.duration > 0.0:
            logger.warning("Twin minimizers are not related by a reflection S or T")

    logger.debug(f"Minimizer class {primary.tag.value}, length {primary.length:.10f}")
    return primary


def distance(q_in: Pose, q_fin: Pose, xi: float = 1.0, config: ShootingConfig = ShootingConfig()) -> float:
    """Sub-Riemannian distance, the length of a minimizer"""
    return solve_pmec(BoundaryPair(q_in, q_fin, xi), config).length


def paired_lift(m: Minimizer) -> Minimizer:
    """The same planar curve traversed with theta + pi and u -> -u"""
    g = m.geodesic
    flipped = Geodesic.from_state(heading_flip(g.state0))
    frame = m.frame.compose(Pose(0.0, 0.0, math.pi))
    return Minimizer(
        geodesic=flipped,
        duration=m.duration,
        length=m.length,
        cusp_times_internal=list(m.cusp_times_internal),
        cut=m.cut,
        frame=Pose(frame.x, frame.y, frame.theta),
        xi=m.xi,
    )


def solve_pprojective(bp: BoundaryPair, config: ShootingConfig = ShootingConfig()) -> Minimizer:
    """Minimizer of the projective problem, angles taken modulo pi

    Of the four lifts only (theta_in, theta_fin) and (theta_in, theta_fin + pi)
    are solved: the lifts starting at theta_in + pi trace the same curves
    with u -> -u.
    """
    logger = logging.getLogger()
    lifts = []
    for shift in (0.0, math.pi):
        q_fin = Pose(bp.q_fin.x, bp.q_fin.y, bp.q_fin.theta + shift)
        m = solve_pmec(BoundaryPair(bp.q_in, q_fin, bp.xi), config)

        partner = paired_lift(m)
        expected = Pose(q_fin.x, q_fin.y, q_fin.theta + math.pi)
        mismatch = partner.endpoint().distance(expected) if m.duration > 0.0 else 0.0
        if mismatch > 10.0 * config.tol:
            logger.warning(f"Paired lift misses its endpoint by {mismatch:.3e}")
        lifts.append(m)

    logger.debug("Lift lengths: " + ", ".join(f"{m.length:.10f}" for m in lifts))
    return min(lifts, key=lambda m: m.length)


def _boundary_marginal(m: Minimizer, config: ShootingConfig) -> bool:
    g, T = m.geodesic, m.duration
    if g.tag in (GeodesicClass.S, GeodesicClass.U) or T == 0.0:
        return False
    h = config.marginal_tol
    half_sin, _, _ = g.controls(np.array([-h, h, T - h, T + h]))
    return bool(half_sin[0] * half_sin[1] <= 0.0 or half_sin[2] * half_sin[3] <= 0.0)


def pcurve_existence(bp: BoundaryPair, config: ShootingConfig = ShootingConfig()) -> ExistenceVerdict:
    """Existence of a solution of the curve problem

    A solution exists iff a mechanical minimizer has neither internal cusps
    nor angular cusps and runs forward (u > 0 off its endpoints); cusps at
    the endpoints are allowed. A minimizer that only runs backwards cannot be
    followed with u = 1, so the curve would have to turn back through a cusp.

    Args:
        bp: boundary pair
        config: shooting budget and tolerances

    Returns:
        verdict with the primary mechanical minimizer as witness
    """
    return existence_verdict(solve_pmec(bp, config), config)


def existence_verdict(m: Minimizer, config: ShootingConfig = ShootingConfig()) -> ExistenceVerdict:
    """Verdict of the curve problem resting on the mechanical minimizer m"""
    logger = logging.getLogger()
    candidates = m.minimizers()
    marginal = any(_boundary_marginal(x, config) for x in candidates)

    if m.twin is not None and m.has_internal_cusp != m.twin.has_internal_cusp:
        logger.warning("Twin minimizers disagree on internal cusps, reporting the internal cusp")

    cusped = [x for x in candidates if x.has_internal_cusp]
    if cusped:
        verdict = ExistenceVerdict(Verdict.NO_SOLUTION_INTERNAL_CUSP, m, cusped[0].cusp_times_internal, marginal)
    elif m.tag == GeodesicClass.S and m.duration > 0.0:
        verdict = ExistenceVerdict(Verdict.NO_SOLUTION_ANGULAR_CUSP, m, [], marginal)
    elif m.duration == 0.0 or any(x.forward for x in candidates):
        verdict = ExistenceVerdict(Verdict.EXISTS, m, [], marginal)
    else:
        verdict = ExistenceVerdict(Verdict.NO_SOLUTION_INTERNAL_CUSP, m, [], marginal, backward=True)

    if marginal:
        logger.warning(f"Boundary-marginal verdict {verdict.tag.value}: a cusp lies near an endpoint")
    return verdict


def solve_report(
    bp: BoundaryPair, config: ShootingConfig = ShootingConfig(), projective: bool = False
) -> SolveReport:
    """Minimizers, length, cusps and existence verdict of one boundary pair"""
    m = solve_pprojective(bp, config) if projective else solve_pmec(bp, config)
    verdict = existence_verdict(m, config)
    return SolveReport(
        minimizers=m.minimizers(),
        length=m.length,
        cusp_times=m.cusp_times_internal,
        verdict=verdict,
    )

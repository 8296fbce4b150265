import math

import numpy as np
import numpy.testing as npt
import pytest

import src.solver as solver
from src.geodesic import ORIGIN, Geodesic, Pose
from src.exceptions import CutSearchError, ShootingError
from src.optimality import cut_time
from src.pendulum import GeodesicClass, PendulumState
from src.solver import (
    BoundaryPair,
    ShootingConfig,
    Verdict,
    denormalize,
    distance,
    expand_xi,
    length_upper_bound,
    mec_cost,
    normalize_to_origin,
    paired_lift,
    pcurve_existence,
    plane_length,
    reduce_xi,
    solve_pmec,
    solve_pprojective,
    solve_report,
)
from src.targets import forward_targets


def test_boundary_pair_needs_positive_xi():
    with pytest.raises(ValueError):
        BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0), xi=0.0)


def test_normalization_round_trip():
    bp = BoundaryPair(Pose(1.0, -2.0, 0.8), Pose(0.5, 3.0, 2.2))
    target, frame = normalize_to_origin(bp)
    assert denormalize(target, frame).distance(bp.q_fin) < 1e-12
    assert frame == bp.q_in


def test_xi_reduction():
    bp = BoundaryPair(ORIGIN, Pose(2.0, 0.0, 0.0), xi=2.0)
    reduced = reduce_xi(bp)
    assert reduced.xi == 1.0
    npt.assert_allclose(reduced.q_fin.as_tuple(), (4.0, 0.0, 0.0))
    assert expand_xi(reduced, 2.0) == bp

    line = Geodesic.from_state(PendulumState(math.pi, 0.0))
    npt.assert_allclose(mec_cost(line, 4.0), 4.0, rtol=1e-12)
    npt.assert_allclose(mec_cost(line, 4.0, xi=2.0, scale=0.5), 4.0, rtol=1e-12)
    npt.assert_allclose(2.0 * plane_length(line, 4.0) * 0.5, 4.0, rtol=1e-12)


def test_length_upper_bound():
    npt.assert_allclose(length_upper_bound(Pose(1.0, 0.0, 0.0)), 1.0)
    npt.assert_allclose(length_upper_bound(Pose(-1.0, 0.0, 0.0)), 1.0)
    npt.assert_allclose(length_upper_bound(Pose(0.0, 0.0, 0.5 * math.pi)), 0.5 * math.pi)


def test_straight_ahead(fast_config):
    m = solve_pmec(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config)
    assert m.tag == GeodesicClass.U
    npt.assert_allclose(m.length, 1.0, atol=1e-6)
    assert m.geodesic.state0 == PendulumState(math.pi, 0.0)
    assert m.endpoint().distance(Pose(1.0, 0.0, 0.0)) <= 1e-8
    verdict = pcurve_existence(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config)
    assert verdict.tag == Verdict.EXISTS


def test_refined_state_snaps_onto_the_line(fast_config):
    target = Pose(1.0, 0.0, 0.0)
    state, T, residual = solver._snap(PendulumState(math.pi + 1e-7, 3e-8), 1.0, 1e-8, target, fast_config)
    assert state == PendulumState(math.pi, 0.0)
    assert T == 1.0
    assert residual <= 1e-14
    # too far from the equilibrium to move
    far = PendulumState(math.pi + 1e-3, 0.0)
    assert solver._snap(far, 1.0, 1e-3, target, fast_config) == (far, 1.0, 1e-3)


def test_candidate_without_cut_time_is_discarded(fast_config, monkeypatch):
    calls = []

    def flaky_cut_time(g):
        calls.append(g)
        if len(calls) == 1:
            raise CutSearchError("no Maxwell time")
        return cut_time(g)

    monkeypatch.setattr(solver, "_coarse_sweep", lambda *args: [(math.pi, 0.0, 1.0), (math.pi, 0.0, 1.0)])
    monkeypatch.setattr(solver, "cut_time", flaky_cut_time)
    m = solve_pmec(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config)
    assert m.tag == GeodesicClass.U
    npt.assert_allclose(m.length, 1.0, atol=1e-12)
    assert len(calls) >= 2


def test_no_cut_time_anywhere_is_a_shooting_failure(fast_config, monkeypatch):
    def failing_cut_time(g):
        raise CutSearchError("no Maxwell time")

    monkeypatch.setattr(solver, "_coarse_sweep", lambda *args: [(math.pi, 0.0, 1.0)])
    monkeypatch.setattr(solver, "cut_time", failing_cut_time)
    with pytest.raises(ShootingError):
        solve_pmec(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config)


def test_rotation_in_place(fast_config):
    bp = BoundaryPair(ORIGIN, Pose(0.0, 0.0, 0.5 * math.pi))
    m = solve_pmec(bp, fast_config)
    assert m.tag == GeodesicClass.S
    npt.assert_allclose(m.length, 0.5 * math.pi, atol=1e-12)
    assert m.twin is None
    assert pcurve_existence(bp, fast_config).tag == Verdict.NO_SOLUTION_ANGULAR_CUSP


def test_half_turn_has_two_rotations(fast_config):
    m = solve_pmec(BoundaryPair(ORIGIN, Pose(0.0, 0.0, math.pi)), fast_config)
    assert len(m.minimizers()) == 2
    npt.assert_allclose([x.length for x in m.minimizers()], [math.pi, math.pi], atol=1e-12)


def test_zero_length(fast_config):
    q = Pose(0.3, 0.4, 1.0)
    m = solve_pmec(BoundaryPair(q, q), fast_config)
    assert m.length == 0.0
    assert m.endpoint() == q
    assert pcurve_existence(BoundaryPair(q, q), fast_config).tag == Verdict.EXISTS


def test_straight_behind(fast_config):
    bp = BoundaryPair(ORIGIN, Pose(-1.0, 0.0, 0.0))
    m = solve_pmec(bp, fast_config)
    npt.assert_allclose(m.length, 1.0, atol=1e-6)
    assert not m.forward
    verdict = pcurve_existence(bp, fast_config)
    assert verdict.tag == Verdict.NO_SOLUTION_INTERNAL_CUSP
    assert verdict.backward


def test_u_turn_exists(fast_config):
    verdict = pcurve_existence(BoundaryPair(ORIGIN, Pose(0.0, 1.0, math.pi)), fast_config)
    assert verdict.tag == Verdict.EXISTS


def test_xi_solution_maps_back(fast_config):
    bp = BoundaryPair(ORIGIN, Pose(2.0, 0.0, 0.0), xi=2.0)
    m = solve_pmec(bp, fast_config)
    npt.assert_allclose(m.length, 4.0, atol=1e-6)
    assert m.endpoint().distance(bp.q_fin) <= 1e-8
    npt.assert_allclose(mec_cost(m.geodesic, m.duration, xi=2.0, scale=0.5), m.length, atol=1e-6)


def test_projective_lifts(fast_config):
    m = solve_pprojective(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config)
    npt.assert_allclose(m.length, 1.0, atol=1e-6)

    lift = solve_pmec(BoundaryPair(ORIGIN, Pose(0.5, 0.5, 1.0)), fast_config)
    partner = paired_lift(lift)
    npt.assert_allclose(partner.length, lift.length)
    assert partner.endpoint().distance(Pose(0.5, 0.5, 1.0 + math.pi)) <= 1e-8


def test_solve_report(fast_config):
    report = solve_report(BoundaryPair(ORIGIN, Pose(1.0, 0.0, 0.0)), fast_config, projective=True)
    npt.assert_allclose(report.length, 1.0, atol=1e-6)
    assert report.verdict.exists
    assert report.cusp_times == []


@pytest.mark.slow
def test_forward_targets_are_recovered():
    for target, _, t in forward_targets(25, seed=3):
        m = solve_pmec(BoundaryPair(ORIGIN, target), ShootingConfig())
        assert m.endpoint().distance(target) <= 1e-8
        npt.assert_allclose(m.length, t, atol=1e-6)
        assert len(m.minimizers()) <= 2


@pytest.mark.slow
def test_maxwell_target_has_reflected_twin(fast_config):
    g = Geodesic.from_state(PendulumState(0.5 * math.pi, 0.6))
    t_cut = cut_time(g).t_cut
    m = solve_pmec(BoundaryPair(ORIGIN, g.eval(t_cut)), fast_config)
    assert len(m.minimizers()) == 2
    npt.assert_allclose(m.length, m.twin.length, atol=1e-8)
    assert m.twin_reflection in ("S", "T")


@pytest.mark.slow
def test_distance_is_left_invariant(fast_config):
    q_in, q_fin = Pose(1.0, -0.5, 0.7), Pose(1.6, 0.4, 1.5)
    moved = q_in.inverse().compose(q_fin)
    npt.assert_allclose(
        distance(q_in, q_fin, config=fast_config), distance(ORIGIN, moved, config=fast_config), atol=1e-7
    )


@pytest.mark.slow
@pytest.mark.parametrize("x, y, theta", [(-0.5, 0.3, 0.4), (-1.2, -0.6, 2.0), (-0.2, 1.0, 4.0)])
def test_no_curve_behind_the_start(fast_config, x, y, theta):
    verdict = pcurve_existence(BoundaryPair(ORIGIN, Pose(x, y, theta)), fast_config)
    assert verdict.tag == Verdict.NO_SOLUTION_INTERNAL_CUSP


@pytest.mark.slow
def test_triangle_inequality():
    config = ShootingConfig()
    targets = forward_targets(6, seed=11)
    for (b, _, t_ab), (step, _, t_bc) in zip(targets[::2], targets[1::2]):
        c = b.compose(step)
        d_ab = distance(ORIGIN, b, config=config)
        d_bc = distance(b, c, config=config)
        d_ac = distance(ORIGIN, c, config=config)
        npt.assert_allclose([d_ab, d_bc], [t_ab, t_bc], atol=1e-6)
        assert d_ac <= d_ab + d_bc + 1e-6


@pytest.mark.slow
def test_xi_rescaling_on_random_targets():
    rng = np.random.default_rng(5)
    for target, _, t in forward_targets(5, seed=17):
        xi = float(rng.uniform(0.5, 3.0))
        q_fin = Pose(target.x / xi, target.y / xi, target.theta)
        m = solve_pmec(BoundaryPair(ORIGIN, q_fin, xi=xi), ShootingConfig())
        npt.assert_allclose(m.length, t, atol=1e-6)
        assert m.endpoint().distance(q_fin) <= 1e-7
        npt.assert_allclose(mec_cost(m.geodesic, m.duration, xi=xi, scale=1.0 / xi), m.length, atol=1e-6)


@pytest.mark.slow
def test_projective_lifts_on_random_targets():
    config = ShootingConfig()
    for target, _, t in forward_targets(4, seed=23):
        flipped = Pose(target.x, target.y, target.theta + math.pi)
        # both ends turned by pi: same planar curve, reversed gear
        npt.assert_allclose(distance(Pose(0.0, 0.0, math.pi), flipped, config=config), t, atol=1e-6)

        other = distance(ORIGIN, flipped, config=config)
        projective = solve_pprojective(BoundaryPair(ORIGIN, target), config)
        assert projective.length <= t + 1e-6
        assert projective.length <= other + 1e-6
        npt.assert_allclose(projective.length, min(t, other), atol=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("x, y, theta", [(1.0, 0.5, 0.3), (0.4, 0.9, 2.5), (0.8, -0.3, 5.5), (-0.5, 0.3, 0.4)])
def test_mirror_targets_are_solved_alike(x, y, theta):
    config = ShootingConfig()
    verdict = pcurve_existence(BoundaryPair(ORIGIN, Pose(x, y, theta)), config)
    image = pcurve_existence(BoundaryPair(ORIGIN, Pose(x, -y, -theta)), config)
    assert verdict.tag == image.tag
    npt.assert_allclose(verdict.witness.length, image.witness.length, atol=1e-6)

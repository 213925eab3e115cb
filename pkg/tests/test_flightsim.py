"""Kinematic stepping, altitude repulsion, crash/respawn, gimbal, feedback."""

import math

import numpy as np
import pytest

from embflight import (
    AttitudeCommand,
    CourseComplete,
    MimicParams,
    SafetyConfig,
    SimState,
    VelocityCommand,
    apply_altitude_repulsion,
    climb_angle,
    detect_crash,
    feedback,
    generate_course,
    gimbal_pose,
    mimic_velocity,
    respawn,
    step,
    steady_turn_radius,
    wrap_angle,
)

P = MimicParams()
SAFE = SafetyConfig()


def fit_circle_radius(xs, ys):
    """Least-squares (algebraic) circle fit; the independent turn oracle."""
    A = np.column_stack([2 * xs, 2 * ys, np.ones_like(xs)])
    b = xs**2 + ys**2
    (a, c, d), *_ = np.linalg.lstsq(A, b, rcond=None)
    return math.sqrt(d + a * a + c * c)


def fly(state, cmd, steps, dt=0.02, safety=SAFE):
    traj = []
    for _ in range(steps):
        state = step(state, cmd, dt, P, safety)
        traj.append(state)
    return state, traj


class TestStep:
    def test_straight_flight(self):
        s0 = SimState(position=(0.0, 0.0, 100.0), yaw=0.0)
        s, _ = fly(s0, AttitudeCommand(), 500)
        x, y, z = s.position
        assert x == pytest.approx(12.0 * 10.0, rel=1e-9)
        assert y == pytest.approx(0.0, abs=1e-12)
        assert z == pytest.approx(100.0, abs=1e-12)
        assert s.yaw == 0.0

    def test_constant_roll_traces_the_analytic_circle(self):
        s0 = SimState(position=(0.0, 0.0, 100.0))
        _, traj = fly(s0, AttitudeCommand(math.radians(15), 0.0), 3000)
        xs = np.array([s.position[0] for s in traj])
        ys = np.array([s.position[1] for s in traj])
        r = fit_circle_radius(xs, ys)
        assert abs(r - steady_turn_radius(math.radians(15), P)) / r < 0.02

    def test_circle_fit_converges_under_dt_halving(self):
        s0 = SimState(position=(0.0, 0.0, 100.0))
        radii = []
        for dt, steps in ((0.02, 3000), (0.01, 6000)):
            _, traj = fly(s0, AttitudeCommand(math.radians(15), 0.0), steps, dt=dt)
            xs = np.array([s.position[0] for s in traj])
            ys = np.array([s.position[1] for s in traj])
            radii.append(fit_circle_radius(xs, ys))
        assert abs(radii[1] - radii[0]) / radii[0] < 0.002

    def test_pitch_gives_expected_climb_rate(self):
        s0 = SimState(position=(0.0, 0.0, 100.0))
        s, _ = fly(s0, AttitudeCommand(0.0, math.radians(5)), 500)
        gained = s.position[2] - 100.0
        assert gained == pytest.approx(1.0498639623110881 * 10.0, rel=1e-9)

    def test_per_step_displacement_is_cruise_speed(self):
        rng = np.random.default_rng(0)
        s = SimState(position=(0.0, 0.0, 100.0))
        for _ in range(200):
            cmd = AttitudeCommand(
                rng.uniform(-P.phi_max, P.phi_max), rng.uniform(-P.theta_max, P.theta_max)
            )
            nxt = step(s, cmd, 0.02, P, SAFE)
            moved = math.dist(nxt.position, s.position)
            assert abs(moved - P.v * 0.02) <= 1e-9 * P.v * 0.02
            s = nxt

    def test_vz_never_changes_heading(self):
        # same roll, different pitches: identical yaw traces
        s0 = SimState(position=(0.0, 0.0, 200.0))
        a, _ = fly(s0, AttitudeCommand(math.radians(10), 0.0), 300)
        b, _ = fly(s0, AttitudeCommand(math.radians(10), math.radians(15)), 300)
        assert a.yaw == b.yaw

    def test_determinism_bit_identical(self):
        s0 = SimState(position=(0.0, 0.0, 100.0))
        cmds = [
            AttitudeCommand(math.sin(i / 7) * 0.3, math.cos(i / 11) * 0.2) for i in range(400)
        ]
        runs = []
        for _ in range(2):
            s = s0
            out = []
            for cmd in cmds:
                s = step(s, cmd, 0.02, P, SAFE)
                out.append((s.position, s.yaw, s.t))
            runs.append(out)
        assert runs[0] == runs[1]

    def test_dt_bounds(self):
        with pytest.raises(ValueError):
            step(SimState(), AttitudeCommand(), 0.2, P, SAFE)


class TestAltitudeRepulsion:
    def test_above_floor_untouched(self):
        assert apply_altitude_repulsion(25.0, -3.0, SAFE) == -3.0

    def test_below_floor_pushes_up(self):
        assert apply_altitude_repulsion(18.0, 0.0, SAFE) == pytest.approx(2.0)

    def test_continuous_at_floor(self):
        assert apply_altitude_repulsion(20.0, -1.5, SAFE) == -1.5

    def test_full_sink_dive_never_reaches_ground(self):
        """Sustained max sink from the floor altitude stays airborne and
        settles where repulsion balances the sink."""
        s = SimState(position=(0.0, 0.0, SAFE.floor_alt))
        cmd = AttitudeCommand(0.0, -P.theta_max)  # max sink approx 5.85 m/s
        zs = []
        for _ in range(5000):
            s = step(s, cmd, 0.02, P, SAFE)
            zs.append(s.position[2])
        assert min(zs) > SAFE.ground_alt
        sink = abs(mimic_velocity(cmd, P).v_z)
        assert zs[-1] == pytest.approx(SAFE.floor_alt - sink / SAFE.k_rep, abs=0.05)


class TestCrashRespawn:
    def test_crash_predicate(self):
        assert not detect_crash(SimState(position=(0, 0, 10.0)), SAFE)
        assert detect_crash(SimState(position=(0, 0, 0.0)), SAFE)
        assert detect_crash(SimState(position=(0, 0, -1.0)), SAFE)

    def test_respawn_placement(self):
        course = generate_course(0, 10, 40.0)
        s = respawn(course, 3, P)
        target = np.array(course.waypoints[3].center)
        prev = np.array(course.waypoints[2].center)
        d = (target - prev) / np.linalg.norm(target - prev)
        np.testing.assert_allclose(np.array(s.position), target - 40.0 * d, atol=1e-12)
        assert s.yaw == pytest.approx(math.atan2(d[1], d[0]))
        assert (s.cmd.phi_ref, s.cmd.theta_ref) == (0.0, 0.0)

    def test_respawn_is_deterministic(self):
        course = generate_course(0, 10, 40.0)
        assert respawn(course, 2, P) == respawn(course, 2, P)

    def test_respawn_counts_crashes(self):
        course = generate_course(0, 10, 40.0)
        crashed = SimState(position=(0, 0, 0.0), t=33.0, crashed_count=1)
        s = respawn(course, 0, P, prev=crashed)
        assert s.crashed_count == 2
        assert s.t == 33.0

    def test_respawn_past_course_end(self):
        course = generate_course(0, 5, 40.0)
        with pytest.raises(CourseComplete):
            respawn(course, 5, P)


class TestGimbal:
    def test_level_neutral(self):
        pose = gimbal_pose(VelocityCommand(12.0, 0.0, 0.0))
        assert (pose.pitch, pose.yaw) == (0.0, 0.0)

    def test_aligns_with_climb(self):
        v = mimic_velocity(AttitudeCommand(math.radians(10), math.radians(5)), P)
        pose = gimbal_pose(v)
        assert pose.pitch == pytest.approx(climb_angle(v), abs=1e-15)

    def test_head_offsets_pass_through(self):
        pose = gimbal_pose(VelocityCommand(12.0, 0.0, 0.0), head_yaw=math.radians(30))
        assert pose.yaw == pytest.approx(math.radians(30))
        pose = gimbal_pose(VelocityCommand(12.0, 0.0, 0.0), head_pitch=2.0)
        assert pose.pitch == math.pi / 2  # clamped


class TestFeedback:
    def test_level_cruise(self):
        fb = feedback(SimState(), P)
        assert (fb.roll, fb.pitch, fb.airspeed) == (0.0, 0.0, 12.0)

    def test_attitude_passthrough(self):
        cmd = AttitudeCommand(math.radians(10), math.radians(5))
        fb = feedback(SimState(cmd=cmd), P)
        assert (fb.roll, fb.pitch) == (cmd.phi_ref, cmd.theta_ref)
        assert fb.airspeed == 12.0

    def test_level_after_respawn(self):
        course = generate_course(0, 10, 40.0)
        fb = feedback(respawn(course, 1, P), P)
        assert (fb.roll, fb.pitch, fb.airspeed) == (0.0, 0.0, 12.0)


def test_wrap_angle_range():
    for a in np.linspace(-20, 20, 2001):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi


def test_safety_config_validation():
    with pytest.raises(ValueError):
        SafetyConfig(floor_alt=0.0, ground_alt=0.0)
    with pytest.raises(ValueError):
        SafetyConfig(k_rep=-1.0)

"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with `pytest -s` to see them
live).  Tolerances are pinned here, not calibrated elsewhere.
"""

import contextlib
import json
import math
import time

import numpy as np
import pytest

import embflight as ef
from embflight.cli import main as cli_main
from embflight.session import (
    CourseSpec,
    PhaseSpec,
    RunConfig,
    Session,
    record_session,
    replay_session,
)


@contextlib.contextmanager
def criterion(num: int, label: str):
    try:
        yield
    except BaseException:
        print(f"FAIL criterion {num:2d}: {label}")
        raise
    print(f"PASS criterion {num:2d}: {label}")


P = ef.MimicParams()


def fit_circle_radius(xs, ys):
    """Independent least-squares circle-fit oracle."""
    A = np.column_stack([2 * xs, 2 * ys, np.ones_like(xs)])
    b = xs**2 + ys**2
    (a, c, d), *_ = np.linalg.lstsq(A, b, rcond=None)
    return math.sqrt(d + a * a + c * c)


def test_criterion_01_speed_conservation():
    with criterion(1, "speed conservation over 10^4 random in-clamp commands"):
        start = time.perf_counter()
        rng = np.random.default_rng(0)
        for _ in range(10_000):
            cmd = ef.AttitudeCommand(
                rng.uniform(-P.phi_max, P.phi_max), rng.uniform(-P.theta_max, P.theta_max)
            )
            speed = ef.mimic_velocity(cmd, P).speed()
            assert abs(speed - 12.0) <= 1e-9 * 12.0
        assert time.perf_counter() - start < 1.0


def test_criterion_02_pitch_law_exactness():
    with criterion(2, "vertical command law exact in the pre-clamp region"):
        got = ef.vz_from_pitch(math.radians(5), P)
        assert abs(got - 12.0 * math.tan(math.radians(5))) < 1e-12


def test_criterion_03_closed_loop_turn_geometry():
    with criterion(3, "closed-loop 15 deg turn matches the analytic radius within 2%"):
        start = time.perf_counter()
        cmd = ef.AttitudeCommand(math.radians(15), 0.0)
        s = ef.SimState(position=(0.0, 0.0, 100.0))
        safety = ef.SafetyConfig()
        xs, ys = [], []
        for _ in range(3000):  # 60 s at dt = 0.02
            s = ef.step(s, cmd, 0.02, P, safety)
            xs.append(s.position[0])
            ys.append(s.position[1])
        fitted = fit_circle_radius(np.array(xs), np.array(ys))
        analytic = ef.steady_turn_radius(math.radians(15), P)
        assert analytic == pytest.approx(54.78239717532297, rel=1e-9)
        assert abs(fitted - analytic) / analytic < 0.02
        assert time.perf_counter() - start < 1.0


def test_criterion_04_printed_radicand_regression():
    with criterion(4, "sqrt(1+A) misprint breaks speed conservation by > 1e-3"):
        phi = math.radians(10)
        a = ef.turn_coefficient(phi, P)
        v_y = P.v * a / math.sqrt(1.0 + a)  # misprinted radicand
        v_x = v_y / a  # lateral/forward ratio the coefficient defines
        violation = abs(math.hypot(v_x, v_y) - P.v) / P.v
        assert violation > 1e-3
        good = ef.mimic_velocity(ef.AttitudeCommand(phi, 0.0), P)
        assert abs(good.speed() - P.v) / P.v <= 1e-9


def test_criterion_05_scoring_constants():
    with criterion(5, "score anchors: 100% at centre, 1% at 38.4 m, sigma 12.6530 m"):
        params = ef.ScoringParams()
        assert ef.score_fn(0.0, params) == 100.0
        assert abs(ef.score_fn(38.4, params) - 1.0) < 1e-6
        assert params.sigma == pytest.approx(12.6530, abs=5e-5)


def test_criterion_06_link_emulation():
    with criterion(6, "3dr-915 loss 2.0% +/- 0.13% over 1e5 packets; xbee-wifi RTT 56.5 ms"):
        start = time.perf_counter()
        link = ef.Link(ef.PROFILES["3dr-915"], seed=0)
        n = 100_000
        for i in range(n):
            link.send(i, i * 1e-4)
        loss = link.dropped / n
        assert abs(loss - 0.020) <= 0.0013281566172707194  # 3-sigma binomial
        stats = ef.measure_roundtrip(ef.PROFILES["xbee-wifi"], freq=30.0, n_packets=2000)
        assert stats.mean_rtt == pytest.approx(56.5, abs=1e-9)
        assert time.perf_counter() - start < 5.0


def test_criterion_07_latency_budgets():
    with criterion(7, "48 ms video path passes 50 ms budget; ~100 ms gimbal path fails"):
        video = ef.latency_budget_check(ef.VIDEO_PATH_MS, ef.VISUAL_BUDGET_MS)
        assert video.total_ms == pytest.approx(48.0) and video.passed
        gimbal = ef.latency_budget_check(ef.GIMBAL_PATH_MS, ef.VISUAL_BUDGET_MS)
        assert gimbal.total_ms == pytest.approx(100.0) and not gimbal.passed


def test_criterion_08_gimbal_alignment():
    with criterion(8, "gimbal pitch equals the climb angle for 10^3 random commands"):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            cmd = ef.AttitudeCommand(
                rng.uniform(-P.phi_max, P.phi_max), rng.uniform(-P.theta_max, P.theta_max)
            )
            vel = ef.mimic_velocity(cmd, P)
            pose = ef.gimbal_pose(vel)
            expect = math.atan2(vel.v_z, math.hypot(vel.v_x, vel.v_y))
            assert abs(pose.pitch - expect) <= 1e-9


def test_criterion_09_determinism(tmp_path):
    with criterion(9, "pilot-run byte-identical; 600-tick record/replay matches"):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code = cli_main(
                ["pilot-run", "--strategy", "attitude", "--seed", "0", "--out", str(path)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

        log = tmp_path / "session.jsonl"
        config = RunConfig(
            input_source="pilot", phases=(PhaseSpec("training", duration_s=60.0),)
        )
        record_session(log, config, inputs=[], ticks=600)
        assert replay_session(log, verify=True) == 600


def test_criterion_10_pilot_competence_and_latency_monotonicity():
    with criterion(10, "pursuit >= 90% on seed-0 course; score non-increasing in latency"):
        course = ef.generate_course(0, 84, 40.0)
        means = []
        for one_way_ms in (0.0, 50.0, 100.0, 200.0):
            link = (
                None
                if one_way_ms == 0.0
                else ef.LinkProfile(
                    name=f"lat{one_way_ms:.0f}",
                    base_latency=2.0 * one_way_ms,
                    jitter=0.0,
                    loss_prob=0.0,
                )
            )
            report = ef.run_episode("attitude", course, link, ef.EpisodeConfig())
            assert len(report.records) == 84
            means.append(report.mean_score)
        assert means[0] >= 90.0  # golden threshold, frozen after tuning
        assert all(x >= y for x, y in zip(means, means[1:]))


def test_criterion_11_tick_performance():
    with criterion(11, "p99 session tick under 2 ms across a full evaluation episode"):
        config = RunConfig(
            input_source="pilot",
            phases=(PhaseSpec("evaluation", waypoints=84),),
            course=CourseSpec(0, 84, 40.0),
        )
        session = Session(config)
        durations = []
        while not session.complete and session.tick_count < 50 * 900:
            t0 = time.perf_counter()
            session.tick()
            durations.append(time.perf_counter() - t0)
        assert session.complete, "episode must finish"
        p99 = float(np.percentile(np.array(durations), 99))
        print(f"  [tick p99 = {p99 * 1000:.3f} ms over {len(durations)} ticks]", end=" ")
        assert p99 < 0.002


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-s", "-v"]))

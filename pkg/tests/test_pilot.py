"""Synthetic pursuit pilot: command geometry and closed-loop episodes."""

import json
import math

import pytest

from embflight import (
    Course,
    EpisodeConfig,
    LinkProfile,
    MimicParams,
    PROFILES,
    PursuitGains,
    SimState,
    generate_course,
    initial_state,
    pursuit_command,
    run_episode,
)

P = MimicParams()
GAINS = PursuitGains()


def single_waypoint_course(center):
    return Course.from_dict(
        {
            "seed": 0,
            "count": 2,
            "spacing_m": 40.0,
            "start_m": [0.0, 0.0, 60.0],
            "waypoints_m": [list(center), [300.0, 0.0, 60.0]],
        }
    )


class TestPursuitCommand:
    def test_dead_ahead_coaltitude(self):
        course = single_waypoint_course((100.0, 0.0, 60.0))
        d = pursuit_command(SimState(position=(0, 0, 60.0), yaw=0.0), course, 0, GAINS)
        assert (d.pitch_axis, d.roll_axis) == (0.0, 0.0)

    def test_ninety_degrees_saturates_roll(self):
        course = single_waypoint_course((0.0, 100.0, 60.0))  # 90 deg toward +roll side
        d = pursuit_command(SimState(position=(0, 0, 60.0), yaw=0.0), course, 0, GAINS)
        assert d.roll_axis == 1.0
        assert d.pitch_axis == 0.0

    def test_above_dead_ahead_pitches_up_only(self):
        course = single_waypoint_course((100.0, 0.0, 90.0))
        d = pursuit_command(SimState(position=(0, 0, 60.0), yaw=0.0), course, 0, GAINS)
        assert d.pitch_axis > 0.0
        assert d.roll_axis == pytest.approx(0.0, abs=1e-12)

    def test_behind_commands_hard_turn(self):
        course = single_waypoint_course((-100.0, 1.0, 60.0))
        d = pursuit_command(SimState(position=(0, 0, 60.0), yaw=0.0), course, 0, GAINS)
        assert abs(d.roll_axis) == 1.0


class TestRunEpisode:
    def test_attitude_meets_golden_threshold(self):
        """Tuned attitude pursuit clears 90% mean on the seed-0 course
        (golden threshold, frozen after the first tuning pass)."""
        course = generate_course(0, 84, 40.0)
        report = run_episode("attitude", course, None, EpisodeConfig())
        assert len(report.records) == 84
        assert report.mean_score >= 90.0
        assert report.crashes == 0

    def test_report_mean_equals_mean_of_records(self):
        course = generate_course(1, 30, 40.0)
        report = run_episode("attitude", course, None, EpisodeConfig())
        assert report.mean_score == pytest.approx(
            sum(r.score for r in report.records) / len(report.records), abs=1e-12
        )

    def test_deterministic_per_seed(self):
        course = generate_course(0, 30, 40.0)
        a = run_episode("attitude", course, PROFILES["3dr-915"], EpisodeConfig(seed=5))
        b = run_episode("attitude", course, PROFILES["3dr-915"], EpisodeConfig(seed=5))
        assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)

    def test_total_loss_degenerates_to_straight_flight(self):
        course = generate_course(0, 40, 40.0)
        dead_link = LinkProfile(name="dead", base_latency=10.0, jitter=0.0, loss_prob=0.9999999)
        lost = run_episode("attitude", course, dead_link, EpisodeConfig())
        tuned = run_episode("attitude", course, None, EpisodeConfig())
        assert lost.mean_score < 0.2 * tuned.mean_score

    def test_zero_gains_equal_straight_baseline(self):
        """Vanishing gains degenerate to (and never beat) straight flight."""
        course = generate_course(0, 40, 40.0)
        tiny = PursuitGains(k_roll=1e-15, k_pitch=1e-15)
        zero_gain = run_episode("attitude", course, None, EpisodeConfig(gains=tiny))
        dead_link = LinkProfile(name="dead", base_latency=10.0, jitter=0.0, loss_prob=0.9999999)
        baseline = run_episode("attitude", course, dead_link, EpisodeConfig())
        assert zero_gain.mean_score <= baseline.mean_score + 1e-6

    def test_latency_monotone_degradation(self):
        course = generate_course(0, 84, 40.0)
        means = []
        for one_way_ms in (0.0, 50.0, 100.0, 200.0):
            link = (
                None
                if one_way_ms == 0.0
                else LinkProfile(
                    name=f"lat{one_way_ms:.0f}",
                    base_latency=2.0 * one_way_ms,
                    jitter=0.0,
                    loss_prob=0.0,
                )
            )
            means.append(run_episode("attitude", course, link, EpisodeConfig()).mean_score)
        assert all(a >= b for a, b in zip(means, means[1:]))

    def test_rate_strategy_completes_course(self):
        course = generate_course(0, 84, 40.0)
        report = run_episode("rate", course, None, EpisodeConfig())
        assert len(report.records) == 84
        assert 0.0 < report.mean_score < 100.0

    def test_time_cap_bounds_duration(self):
        course = generate_course(0, 40, 40.0)
        tiny = PursuitGains(k_roll=1e-15, k_pitch=1e-15)
        report = run_episode("attitude", course, None, EpisodeConfig(gains=tiny))
        cap = 3.0 * course.path_length() / P.v
        assert report.duration <= cap + 0.02

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError):
            run_episode("hover", generate_course(0, 5, 40.0), None, EpisodeConfig())


def test_initial_state_faces_first_waypoint():
    course = generate_course(0, 10, 40.0)
    s = initial_state(course, P)
    w0 = course.waypoints[0].center
    expect = math.atan2(w0[1] - s.position[1], w0[0] - s.position[0])
    assert s.yaw == pytest.approx(expect)
    assert s.position == course.start


def test_gain_validation():
    with pytest.raises(ValueError):
        PursuitGains(k_roll=0.0)

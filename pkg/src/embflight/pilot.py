"""Synthetic pursuit pilot: flies the waypoint course headlessly.

A proportional pursuit law stands in for the human subject so the whole
stack can be exercised and regression-tested without hardware or a
person.  The aim point advances a lookahead distance along the current
course segment but never past the scored waypoint centre, so the pilot
converges onto the segment line and crosses each plane near its centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .course import (
    Course,
    ScoreRecord,
    ScoringParams,
    check_crossing,
    crossing_plane,
    plane_distance,
    score_fn,
)
from .flightsim import (
    CourseComplete,
    SafetyConfig,
    SimState,
    detect_crash,
    respawn,
    step,
    wrap_angle,
)
from .linksim import Link, LinkProfile
from .mapping import (
    Deflection,
    MappingConfig,
    RateStrategyState,
    attitude_strategy,
    rate_strategy_step,
)
from .mimicry import AttitudeCommand, MimicParams, _clamp, mimic_velocity


@dataclass(frozen=True)
class PursuitGains:
    """Deflection per radian of pointing error, and the path lookahead [m]."""

    k_roll: float = 2.0
    k_pitch: float = 2.0
    lookahead: float = 40.0

    def __post_init__(self) -> None:
        if self.k_roll <= 0 or self.k_pitch <= 0 or self.lookahead <= 0:
            raise ValueError("pursuit gains must be positive")


@dataclass(frozen=True)
class EpisodeConfig:
    mimic: MimicParams = field(default_factory=MimicParams)
    mapping: MappingConfig = field(default_factory=MappingConfig)
    safety: SafetyConfig = field(default_factory=SafetyConfig)
    scoring: ScoringParams = field(default_factory=ScoringParams)
    gains: PursuitGains = field(default_factory=PursuitGains)
    dt: float = 0.02
    seed: int = 0
    time_cap_factor: float = 3.0


@dataclass(frozen=True)
class EpisodeReport:
    records: tuple[ScoreRecord, ...]
    mean_score: float
    crashes: int
    duration: float
    strategy: str
    course_seed: int
    link: str | None

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "course_seed": self.course_seed,
            "link": self.link,
            "mean_score_pct": self.mean_score,
            "crashes": self.crashes,
            "duration_s": self.duration,
            "waypoints_scored": len(self.records),
            "records": [
                {
                    "index": r.waypoint_index,
                    "t": r.t,
                    "distance_m": r.distance,
                    "score_pct": r.score,
                    "crashed_before": r.crashed_before,
                }
                for r in self.records
            ],
        }


def _aim_point(state: SimState, course: Course, i: int, lookahead: float):
    """Lookahead point on the segment into waypoint i, capped at its centre."""
    target = course.waypoints[i].center
    if i == 0:
        return target
    prev = course.waypoints[i - 1].center
    seg = tuple(target[j] - prev[j] for j in range(3))
    seg_len2 = sum(v * v for v in seg)
    if seg_len2 == 0.0:
        return target
    rel = tuple(state.position[j] - prev[j] for j in range(3))
    along = sum(rel[j] * seg[j] for j in range(3)) / seg_len2
    frac = min(max(along, 0.0) + lookahead / math.sqrt(seg_len2), 1.0)
    return tuple(prev[j] + frac * seg[j] for j in range(3))


def pursuit_command(state: SimState, course: Course, i: int, gains: PursuitGains) -> Deflection:
    """Deflection proportional to the bearing and elevation to the aim point."""
    aim = _aim_point(state, course, i, gains.lookahead)
    dx = aim[0] - state.position[0]
    dy = aim[1] - state.position[1]
    dz = aim[2] - state.position[2]
    hdist = math.hypot(dx, dy)
    if hdist == 0.0 and dz == 0.0:
        return Deflection()
    bearing_err = wrap_angle(math.atan2(dy, dx) - state.yaw)
    elev_err = math.atan2(dz, max(hdist, 1e-9))
    return Deflection(
        pitch_axis=_clamp(gains.k_pitch * elev_err, -1.0, 1.0),
        roll_axis=_clamp(gains.k_roll * bearing_err, -1.0, 1.0),
    )


def initial_state(course: Course, params: MimicParams) -> SimState:
    """Start at the course anchor, facing the first waypoint, level."""
    w0 = course.waypoints[0].center
    yaw = math.atan2(w0[1] - course.start[1], w0[0] - course.start[0])
    level = AttitudeCommand()
    return SimState(
        position=course.start, yaw=yaw, cmd=level, vel_cmd=mimic_velocity(level, params)
    )


class WaypointTracker:
    """Walks the course planes, applying the skip rule and crash bookkeeping.

    One crossing at most is scored per step.  If the plane of waypoint
    i+1 is crossed while i is still pending, waypoint i is scored at its
    in-plane distance at the moment the skip is detected.
    """

    def __init__(self, course: Course, scoring: ScoringParams) -> None:
        self.course = course
        self.scoring = scoring
        self.next_idx = 0
        self.records: list[ScoreRecord] = []
        self._crash_pending = False
        self._planes = [crossing_plane(course, i) for i in range(len(course.waypoints))]

    @property
    def done(self) -> bool:
        return self.next_idx >= len(self.course.waypoints)

    def note_crash(self) -> None:
        self._crash_pending = True

    def _record(self, idx: int, t: float, distance: float) -> ScoreRecord:
        rec = ScoreRecord(
            waypoint_index=idx,
            t=t,
            distance=distance,
            score=score_fn(distance, self.scoring),
            crashed_before=self._crash_pending,
        )
        self._crash_pending = False
        self.records.append(rec)
        return rec

    def update(self, p_prev, p_new, t: float) -> list[ScoreRecord]:
        """Check the pending plane (and the one after, for skips) for a crossing."""
        if self.done:
            return []
        scored: list[ScoreRecord] = []
        i = self.next_idx
        d = check_crossing(p_prev, p_new, self._planes[i])
        if d is not None:
            scored.append(self._record(i, t, d))
            self.next_idx = i + 1
            return scored
        if i + 1 < len(self._planes):
            d_skip = check_crossing(p_prev, p_new, self._planes[i + 1])
            if d_skip is not None:
                scored.append(self._record(i, t, plane_distance(p_new, self._planes[i])))
                scored.append(self._record(i + 1, t, d_skip))
                self.next_idx = i + 2
        return scored


def run_episode(
    strategy: str,
    course: Course,
    link: LinkProfile | None = None,
    cfg: EpisodeConfig = EpisodeConfig(),
) -> EpisodeReport:
    """Closed-loop pursuit flight through the whole course.

    pilot -> mapping strategy -> (optional link delay both ways) ->
    mimicry -> kinematic step -> crossing detection.  Deterministic per
    seed; capped at time_cap_factor times the nominal duration
    (path length over cruise speed).
    """
    if strategy not in ("attitude", "rate"):
        raise ValueError(f"unknown strategy {strategy!r}")
    state = initial_state(course, cfg.mimic)
    tracker = WaypointTracker(course, cfg.scoring)
    rate_state = RateStrategyState()
    uplink = Link(link, "command", seed=cfg.seed, freq_hz=1.0 / cfg.dt) if link else None
    downlink = Link(link, "feedback", seed=cfg.seed + 1, freq_hz=1.0 / cfg.dt) if link else None
    held = Deflection()  # zero-order hold on the command side
    seen_state = state  # what the pilot sees (possibly delayed)
    time_cap = cfg.time_cap_factor * course.path_length() / cfg.mimic.v
    now = 0.0
    while not tracker.done and now < time_cap:
        if downlink is not None:
            downlink.send(state, now)
            for pkt in downlink.poll(now):
                seen_state = pkt.payload
        else:
            seen_state = state
        wanted = pursuit_command(
            seen_state, course, min(tracker.next_idx, len(course.waypoints) - 1), cfg.gains
        )
        if uplink is not None:
            uplink.send(wanted, now)
            for pkt in uplink.poll(now):
                held = pkt.payload
        else:
            held = wanted
        if strategy == "attitude":
            cmd = attitude_strategy(held, cfg.mimic)
        else:
            rate_state = rate_strategy_step(held, rate_state, cfg.dt, cfg.mapping, cfg.mimic)
            cmd = rate_state.attitude()
        prev_pos = state.position
        state = step(state, cmd, cfg.dt, cfg.mimic, cfg.safety)
        now = state.t
        tracker.update(prev_pos, state.position, now)
        if detect_crash(state, cfg.safety):
            tracker.note_crash()
            try:
                state = respawn(course, tracker.next_idx, cfg.mimic, prev=state)
            except CourseComplete:
                break
            rate_state = RateStrategyState()
            seen_state = state
            held = Deflection()
    records = tuple(tracker.records)
    mean = sum(r.score for r in records) / len(records) if records else 0.0
    return EpisodeReport(
        records=records,
        mean_score=mean,
        crashes=state.crashed_count,
        duration=state.t,
        strategy=strategy,
        course_seed=course.seed,
        link=link.name if link else None,
    )

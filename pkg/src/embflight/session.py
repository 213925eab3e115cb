"""Session orchestration: fixed-tick loop, phases, run config, record/replay.

A Session owns all mutable state of one flight: the simulated drone,
the input mapping, the waypoint tracker, the delayed input link and the
phase machine (passive flight, then training, then evaluation).  One
logical tick loop drives it; everything else talks to it through
message values, so a recorded session replays bit-identically.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Any, Iterable

from .course import (
    Course,
    CourseGenParams,
    ScoringParams,
    generate_course,
    next_waypoint_direction,
)
from .flightsim import (
    CourseComplete,
    SafetyConfig,
    SimState,
    detect_crash,
    feedback,
    gimbal_pose,
    respawn,
    step,
)
from .linksim import (
    DEFAULT_PROFILE,
    PROFILES,
    VIDEO_DISPLAY_LATENCY_MS,
    Link,
    LinkProfile,
)
from .mapping import (
    Deflection,
    HandPose,
    MappingConfig,
    RateStrategyState,
    attitude_strategy,
    hands_to_deflection,
    rate_strategy_step,
    stick_to_deflection,
)
from .mimicry import AttitudeCommand, MimicParams
from .pilot import PursuitGains, WaypointTracker, initial_state, pursuit_command

SEED_ENV_VAR = "EMBFLIGHT_SEED"


@dataclass(frozen=True)
class PhaseSpec:
    """A phase ends after a duration of unpaused time or a waypoint count."""

    name: str
    duration_s: float | None = None
    waypoints: int | None = None

    def __post_init__(self) -> None:
        if (self.duration_s is None) == (self.waypoints is None):
            raise ValueError("phase needs exactly one of duration_s or waypoints")


def default_phases() -> tuple[PhaseSpec, ...]:
    return (
        PhaseSpec("passive", duration_s=60.0),
        PhaseSpec("training", duration_s=540.0),
        PhaseSpec("evaluation", waypoints=84),
    )


@dataclass(frozen=True)
class CourseSpec:
    seed: int = 0
    count: int = 300
    spacing: float = 40.0


@dataclass(frozen=True)
class RunConfig:
    mimic: MimicParams = field(default_factory=MimicParams)
    mapping: MappingConfig = field(default_factory=MappingConfig)
    safety: SafetyConfig = field(default_factory=SafetyConfig)
    scoring: ScoringParams = field(default_factory=ScoringParams)
    gains: PursuitGains = field(default_factory=PursuitGains)
    course: CourseSpec = field(default_factory=CourseSpec)
    link_profile: str = DEFAULT_PROFILE
    strategy: str = "attitude"  # attitude | rate
    input_source: str = "stick"  # hands | stick | pilot
    tick_hz: int = 50
    phases: tuple[PhaseSpec, ...] = field(default_factory=default_phases)
    display_delay_ms: float = VIDEO_DISPLAY_LATENCY_MS
    seed: int = 0

    def __post_init__(self) -> None:
        if not (20 <= self.tick_hz <= 200):
            raise ValueError("tick_hz must lie in [20, 200]")
        if not self.phases:
            raise ValueError("phases must be non-empty")
        if self.strategy not in ("attitude", "rate"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.input_source not in ("hands", "stick", "pilot"):
            raise ValueError(f"unknown input source {self.input_source!r}")
        if self.link_profile not in PROFILES:
            raise ValueError(f"unknown link profile {self.link_profile!r}")

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz

    def profile(self) -> LinkProfile:
        return PROFILES[self.link_profile]


def config_to_dict(cfg: RunConfig) -> dict:
    """RunConfig as a JSON document; units in field names, angles in degrees."""
    return {
        "seed": cfg.seed,
        "tick_hz": cfg.tick_hz,
        "strategy": cfg.strategy,
        "input": cfg.input_source,
        "link_profile": cfg.link_profile,
        "display_delay_ms": cfg.display_delay_ms,
        "mimic": {
            "cruise_speed_mps": cfg.mimic.v,
            "yaw_rate_gain": cfg.mimic.k,
            "gravity_mps2": cfg.mimic.g,
            "roll_max_deg": math.degrees(cfg.mimic.phi_max),
            "pitch_max_deg": math.degrees(cfg.mimic.theta_max),
            "vz_frac_max": cfg.mimic.vz_frac_max,
            "vy_frac_max": cfg.mimic.vy_frac_max,
        },
        "mapping": {
            "hand_full_scale_deg": math.degrees(cfg.mapping.hand_full_scale),
            "rate_max_roll_dps": math.degrees(cfg.mapping.rate_max_roll),
            "rate_max_pitch_dps": math.degrees(cfg.mapping.rate_max_pitch),
            "rate_tau_s": cfg.mapping.rate_tau,
            "deadband": cfg.mapping.deadband,
        },
        "safety": {
            "floor_alt_m": cfg.safety.floor_alt,
            "k_rep_per_s": cfg.safety.k_rep,
            "ground_alt_m": cfg.safety.ground_alt,
        },
        "scoring": {
            "score_floor_dist_m": cfg.scoring.d_floor,
            "score_floor_frac": cfg.scoring.p_floor,
        },
        "gains": {
            "k_roll": cfg.gains.k_roll,
            "k_pitch": cfg.gains.k_pitch,
            "lookahead_m": cfg.gains.lookahead,
        },
        "course": {
            "seed": cfg.course.seed,
            "count": cfg.course.count,
            "spacing_m": cfg.course.spacing,
        },
        "phases": [
            {"name": p.name}
            | ({"duration_s": p.duration_s} if p.duration_s is not None else {})
            | ({"waypoints": p.waypoints} if p.waypoints is not None else {})
            for p in cfg.phases
        ],
    }


def config_from_dict(d: dict) -> RunConfig:
    """Inverse of config_to_dict; missing sections fall back to defaults.

    The EMBFLIGHT_SEED environment variable overrides the config seed.
    """
    mimic_d = d.get("mimic", {})
    mimic = MimicParams(
        v=mimic_d.get("cruise_speed_mps", 12.0),
        k=mimic_d.get("yaw_rate_gain", 0.6),
        g=mimic_d.get("gravity_mps2", 9.81),
        phi_max=math.radians(mimic_d.get("roll_max_deg", 45.0)),
        theta_max=math.radians(mimic_d.get("pitch_max_deg", 26.0)),
        vz_frac_max=mimic_d.get("vz_frac_max", 0.5),
        vy_frac_max=mimic_d.get("vy_frac_max", 0.9),
    )
    map_d = d.get("mapping", {})
    mapping = MappingConfig(
        hand_full_scale=math.radians(map_d.get("hand_full_scale_deg", 30.0)),
        rate_max_roll=math.radians(map_d.get("rate_max_roll_dps", 60.0)),
        rate_max_pitch=math.radians(map_d.get("rate_max_pitch_dps", 60.0)),
        rate_tau=map_d.get("rate_tau_s", 0.3),
        deadband=map_d.get("deadband", 0.05),
    )
    safe_d = d.get("safety", {})
    safety = SafetyConfig(
        floor_alt=safe_d.get("floor_alt_m", 20.0),
        k_rep=safe_d.get("k_rep_per_s", 1.0),
        ground_alt=safe_d.get("ground_alt_m", 0.0),
    )
    score_d = d.get("scoring", {})
    scoring = ScoringParams(
        d_floor=score_d.get("score_floor_dist_m", 38.4),
        p_floor=score_d.get("score_floor_frac", 0.01),
    )
    gains_d = d.get("gains", {})
    gains = PursuitGains(
        k_roll=gains_d.get("k_roll", 2.0),
        k_pitch=gains_d.get("k_pitch", 2.0),
        lookahead=gains_d.get("lookahead_m", 40.0),
    )
    course_d = d.get("course", {})
    course = CourseSpec(
        seed=course_d.get("seed", 0),
        count=course_d.get("count", 300),
        spacing=course_d.get("spacing_m", 40.0),
    )
    phases_d = d.get("phases")
    phases = (
        tuple(
            PhaseSpec(
                name=p["name"],
                duration_s=p.get("duration_s"),
                waypoints=p.get("waypoints"),
            )
            for p in phases_d
        )
        if phases_d
        else default_phases()
    )
    seed = d.get("seed", 0)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        seed = int(env_seed)
    return RunConfig(
        mimic=mimic,
        mapping=mapping,
        safety=safety,
        scoring=scoring,
        gains=gains,
        course=course,
        link_profile=d.get("link_profile", DEFAULT_PROFILE),
        strategy=d.get("strategy", "attitude"),
        input_source=d.get("input", "stick"),
        tick_hz=d.get("tick_hz", 50),
        phases=phases,
        display_delay_ms=d.get("display_delay_ms", VIDEO_DISPLAY_LATENCY_MS),
        seed=seed,
    )


def load_config(path) -> RunConfig:
    with open(path) as f:
        return config_from_dict(json.load(f))


@dataclass(frozen=True)
class InputFrame:
    """One client input sample."""

    t_client: float = 0.0
    hands: HandPose | None = None
    stick: tuple[float, float] | None = None
    head_pitch: float = 0.0
    head_yaw: float = 0.0
    pause: bool = False

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "t_client": self.t_client,
            "head": {"pitch": self.head_pitch, "yaw": self.head_yaw},
            "pause": self.pause,
        }
        if self.hands is not None:
            d["hands"] = {"left": self.hands.left, "right": self.hands.right}
        if self.stick is not None:
            d["stick"] = {"x": self.stick[0], "y": self.stick[1]}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "InputFrame":
        head = d.get("head", {})
        hands = d.get("hands")
        stick = d.get("stick")
        return cls(
            t_client=float(d.get("t_client", 0.0)),
            hands=HandPose(left=float(hands["left"]), right=float(hands["right"]))
            if hands
            else None,
            stick=(float(stick["x"]), float(stick["y"])) if stick else None,
            head_pitch=float(head.get("pitch", 0.0)),
            head_yaw=float(head.get("yaw", 0.0)),
            pause=bool(d.get("pause", False)),
        )


@dataclass(frozen=True)
class StateFrame:
    """Everything the cockpit needs to render one tick."""

    tick: int
    t: float
    position: tuple[float, float, float]
    yaw: float
    roll: float
    pitch: float
    vel_cmd: tuple[float, float, float]
    gimbal_pitch: float
    gimbal_yaw: float
    waypoint_index: int
    waypoint_center: tuple[float, float, float] | None
    arrow_world: tuple[float, float, float]
    arrow_body: tuple[float, float, float]
    last_score: dict | None
    airspeed: float
    phase: str
    paused: bool
    crashed_count: int
    display_delay_ms: float
    echo_t_client: float

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "t": self.t,
            "position": list(self.position),
            "yaw": self.yaw,
            "roll": self.roll,
            "pitch": self.pitch,
            "vel_cmd": list(self.vel_cmd),
            "gimbal": {"pitch": self.gimbal_pitch, "yaw": self.gimbal_yaw},
            "waypoint_index": self.waypoint_index,
            "waypoint_center": list(self.waypoint_center) if self.waypoint_center else None,
            "arrow_world": list(self.arrow_world),
            "arrow_body": list(self.arrow_body),
            "last_score": self.last_score,
            "airspeed": self.airspeed,
            "phase": self.phase,
            "paused": self.paused,
            "crashed_count": self.crashed_count,
            "display_delay_ms": self.display_delay_ms,
            "echo_t_client": self.echo_t_client,
        }


@dataclass
class TickResult:
    frame: StateFrame
    events: list[dict]
    applied: dict


class Session:
    """One flight session driven by a fixed tick loop."""

    def __init__(self, config: RunConfig, course: Course | None = None) -> None:
        self.config = config
        self.course = course or generate_course(
            config.course.seed, config.course.count, config.course.spacing, CourseGenParams()
        )
        self.state = initial_state(self.course, config.mimic)
        self.tracker = WaypointTracker(self.course, config.scoring)
        self.rate_state = RateStrategyState()
        self.uplink = Link(config.profile(), kind="command", seed=config.seed)
        self.held_input = InputFrame()
        self.tick_count = 0
        self.phase_idx = 0
        self.phase_start_t = 0.0
        self.phase_scored = 0
        self.complete = False
        self.force_pause = False  # set by the server on pilot disconnect

    # -- clock ---------------------------------------------------------------

    @property
    def link_now(self) -> float:
        """Wall clock of the tick loop; advances even while paused."""
        return self.tick_count * self.config.dt

    @property
    def phase(self) -> PhaseSpec:
        return self.config.phases[min(self.phase_idx, len(self.config.phases) - 1)]

    # -- inputs ---------------------------------------------------------------

    def submit_input(self, frame: InputFrame) -> None:
        """Feed a client input through the delayed uplink."""
        self.uplink.send(frame, self.link_now)

    def _drain_inputs(self) -> None:
        for pkt in self.uplink.poll(self.link_now):
            self.held_input = pkt.payload

    def _deflection(self) -> Deflection:
        cfg = self.config
        if cfg.input_source == "pilot" or self.phase.name == "passive":
            idx = min(self.tracker.next_idx, len(self.course.waypoints) - 1)
            return pursuit_command(self.state, self.course, idx, cfg.gains)
        if cfg.input_source == "hands" and self.held_input.hands is not None:
            return hands_to_deflection(self.held_input.hands, cfg.mapping)
        if cfg.input_source == "stick" and self.held_input.stick is not None:
            return stick_to_deflection(*self.held_input.stick, cfg.mapping)
        return Deflection()

    # -- tick -----------------------------------------------------------------

    def tick(self, forced: dict | None = None) -> TickResult:
        """Advance one tick; with `forced` (from a log) the input pipeline is bypassed."""
        cfg = self.config
        events: list[dict] = []
        if forced is None:
            self._drain_inputs()
            deflection = self._deflection()
            head_pitch = self.held_input.head_pitch
            head_yaw = self.held_input.head_yaw
            paused = (self.held_input.pause or self.force_pause) and self.phase.name != "passive"
            echo = self.held_input.t_client
        else:
            d = forced["deflection"]
            deflection = Deflection(pitch_axis=d["pitch"], roll_axis=d["roll"])
            head_pitch = forced["head"]["pitch"]
            head_yaw = forced["head"]["yaw"]
            paused = forced["pause"]
            echo = forced["t_client"]

        applied = {
            "deflection": {"pitch": deflection.pitch_axis, "roll": deflection.roll_axis},
            "head": {"pitch": head_pitch, "yaw": head_yaw},
            "pause": paused,
            "t_client": echo,
        }

        if not paused and not self.complete:
            if cfg.strategy == "attitude":
                cmd = attitude_strategy(deflection, cfg.mimic)
            else:
                self.rate_state = rate_strategy_step(
                    deflection, self.rate_state, cfg.dt, cfg.mapping, cfg.mimic
                )
                cmd = self.rate_state.attitude()
            prev_pos = self.state.position
            self.state = step(self.state, cmd, cfg.dt, cfg.mimic, cfg.safety)
            for rec in self.tracker.update(prev_pos, self.state.position, self.state.t):
                self.phase_scored += 1
                events.append(
                    {
                        "event": "waypoint-scored",
                        "index": rec.waypoint_index,
                        "distance_m": rec.distance,
                        "score_pct": rec.score,
                        "crashed_before": rec.crashed_before,
                    }
                )
            if detect_crash(self.state, cfg.safety):
                self.tracker.note_crash()
                try:
                    self.state = respawn(
                        self.course, self.tracker.next_idx, cfg.mimic, prev=self.state
                    )
                except CourseComplete:
                    self._finish(events)
                else:
                    self.rate_state = RateStrategyState()
                    events.append({"event": "crash", "count": self.state.crashed_count})
            self._schedule_phases(events)

        self.tick_count += 1
        frame = self._frame(head_pitch, head_yaw, paused, echo)
        return TickResult(frame=frame, events=events, applied=applied)

    def _finish(self, events: list[dict]) -> None:
        if not self.complete:
            self.complete = True
            recs = self.tracker.records
            mean = sum(r.score for r in recs) / len(recs) if recs else 0.0
            events.append(
                {
                    "event": "session-complete",
                    "mean_score_pct": mean,
                    "waypoints_scored": len(recs),
                    "crashes": self.state.crashed_count,
                }
            )

    def _schedule_phases(self, events: list[dict]) -> None:
        """Advance the phase machine on unpaused time and scored waypoints."""
        if self.complete or self.phase_idx >= len(self.config.phases):
            return
        phase = self.config.phases[self.phase_idx]
        done = False
        if phase.duration_s is not None:
            done = (self.state.t - self.phase_start_t) >= phase.duration_s
        elif phase.waypoints is not None:
            done = self.phase_scored >= phase.waypoints
        if self.tracker.done:
            done = True  # ran out of course
        if not done:
            return
        self.phase_idx += 1
        self.phase_start_t = self.state.t
        self.phase_scored = 0
        if self.phase_idx >= len(self.config.phases):
            self._finish(events)
        else:
            events.append(
                {
                    "event": "phase-change",
                    "from": phase.name,
                    "to": self.config.phases[self.phase_idx].name,
                    "t": self.state.t,
                }
            )

    def _frame(self, head_pitch: float, head_yaw: float, paused: bool, echo: float) -> StateFrame:
        s = self.state
        idx = min(self.tracker.next_idx, len(self.course.waypoints) - 1)
        world, body = next_waypoint_direction(s, self.course, idx)
        pose = gimbal_pose(s.vel_cmd, head_pitch, head_yaw)
        fb = feedback(s, self.config.mimic)
        last = self.tracker.records[-1] if self.tracker.records else None
        return StateFrame(
            tick=self.tick_count,
            t=s.t,
            position=s.position,
            yaw=s.yaw,
            roll=fb.roll,
            pitch=fb.pitch,
            vel_cmd=(s.vel_cmd.v_x, s.vel_cmd.v_y, s.vel_cmd.v_z),
            gimbal_pitch=pose.pitch,
            gimbal_yaw=pose.yaw,
            waypoint_index=idx,
            waypoint_center=self.course.waypoints[idx].center if not self.tracker.done else None,
            arrow_world=world,
            arrow_body=body,
            last_score=(
                {
                    "index": last.waypoint_index,
                    "distance_m": last.distance,
                    "score_pct": last.score,
                }
                if last
                else None
            ),
            airspeed=fb.airspeed,
            phase=self.phase.name if not self.complete else "complete",
            paused=paused,
            crashed_count=s.crashed_count,
            display_delay_ms=self.config.display_delay_ms,
            echo_t_client=echo,
        )


# -- record / replay ---------------------------------------------------------


class Recorder:
    """JSON-lines session log: a config header, then one line per tick."""

    def __init__(self, path, config: RunConfig) -> None:
        self._f = open(path, "w")
        self._f.write(json.dumps({"config": config_to_dict(config)}, sort_keys=True) + "\n")

    def append(self, result: TickResult) -> None:
        line = {
            "tick": result.frame.tick,
            "input": result.applied,
            "state": result.frame.to_dict(),
            "events": result.events,
        }
        self._f.write(json.dumps(line, sort_keys=True) + "\n")

    def close(self) -> None:
        self._f.close()


@dataclass
class ReplayMismatch(Exception):
    line_no: int
    reason: str

    def __str__(self) -> str:
        return f"replay diverged at log line {self.line_no}: {self.reason}"


def record_session(path, config: RunConfig, inputs: Iterable[InputFrame | None], ticks: int) -> list[TickResult]:
    """Run a session for a number of ticks, logging every tick.

    `inputs` yields at most one InputFrame per tick (None = nothing sent
    this tick); it is consumed lazily so tests can script input timing.
    """
    session = Session(config)
    rec = Recorder(path, config)
    results = []
    it = iter(inputs)
    try:
        for _ in range(ticks):
            frame = next(it, None)
            if frame is not None:
                session.submit_input(frame)
            result = session.tick()
            rec.append(result)
            results.append(result)
    finally:
        rec.close()
    return results


def replay_session(path, verify: bool = True) -> int:
    """Re-drive tick() from a log's applied inputs; returns ticks replayed.

    With verify, every recomputed StateFrame must match the logged one
    exactly; the first divergence raises ReplayMismatch with its line
    number.  Corrupt lines raise too.
    """
    with open(path) as f:
        lines = f.readlines()
    if not lines:
        raise ReplayMismatch(1, "empty log")
    try:
        header = json.loads(lines[0])
        config = config_from_dict(header["config"])
    except (json.JSONDecodeError, KeyError) as e:
        raise ReplayMismatch(1, f"bad header: {e}")
    session = Session(config)
    ticks = 0
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
            forced = entry["input"]
            logged_state = entry["state"]
        except (json.JSONDecodeError, KeyError) as e:
            # A mid-write truncation leaves a partial final line; the
            # complete prefix still counts as a successful replay.
            if line_no == len(lines) and not line.endswith("\n"):
                break
            raise ReplayMismatch(line_no, f"corrupt line: {e}")
        result = session.tick(forced=forced)
        ticks += 1
        if verify and result.frame.to_dict() != logged_state:
            raise ReplayMismatch(line_no, "state differs from log")
    return ticks

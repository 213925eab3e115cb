"""embflight: desk-scale embodied-flight teleoperation simulation.

A virtual quadcopter mimics fixed-wing flight through velocity
commands, flown by hand gestures, a stick, or a synthetic pursuit
pilot, scored on a waypoint-cloud course, over an emulated telemetry
link with configurable latency and loss.
"""

from .mimicry import (
    AttitudeCommand,
    MimicParams,
    TurnGeometry,
    VelocityCommand,
    climb_angle,
    mimic_velocity,
    steady_turn_radius,
    turn_coefficient,
    turn_geometry,
    unclamped_roll_limit,
    vz_from_pitch,
    yaw_rate,
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
from .flightsim import (
    CourseComplete,
    GimbalPose,
    PlatformFeedback,
    SafetyConfig,
    SimState,
    apply_altitude_repulsion,
    detect_crash,
    feedback,
    gimbal_pose,
    respawn,
    step,
    wrap_angle,
)
from .course import (
    Course,
    CourseGenParams,
    CrossingPlane,
    ScoreRecord,
    ScoringParams,
    Waypoint,
    check_crossing,
    crossing_plane,
    generate_course,
    next_waypoint_direction,
    outlier_threshold,
    score_fn,
    windowed_performance,
)
from .linksim import (
    DEFAULT_PROFILE,
    GIMBAL_PATH_MS,
    HAPTIC_BUDGET_MS,
    PROFILES,
    VIDEO_PATH_MS,
    VISUAL_BUDGET_MS,
    LatencyStats,
    Link,
    LinkProfile,
    Packet,
    latency_budget_check,
    measure_roundtrip,
)
from .pilot import (
    EpisodeConfig,
    EpisodeReport,
    PursuitGains,
    initial_state,
    pursuit_command,
    run_episode,
)
from .session import (
    InputFrame,
    PhaseSpec,
    RunConfig,
    Session,
    StateFrame,
    config_from_dict,
    config_to_dict,
    load_config,
    record_session,
    replay_session,
)

__version__ = "0.1.0"

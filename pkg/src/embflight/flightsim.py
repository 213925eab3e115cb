"""World-frame kinematics of the mimicked fixed-wing, plus safety and feedback.

Fixed-step semi-implicit Euler: the yaw integrates first and the new
heading carries the horizontal velocity.  World frame is x east,
y north, z up; yaw is the heading of the body x-axis, counterclockwise
from east, wrapped to (-pi, pi].  Positive roll turns the nose toward
the positive lateral axis (increasing yaw).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .mimicry import (
    AttitudeCommand,
    MimicParams,
    VelocityCommand,
    _clamp,
    climb_angle,
    mimic_velocity,
    yaw_rate,
)

if TYPE_CHECKING:
    from .course import Course


TAU = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    return math.pi - (math.pi - angle) % TAU


@dataclass(frozen=True)
class SafetyConfig:
    """Altitude floor with proportional repulsion, and the crash plane."""

    floor_alt: float = 20.0
    k_rep: float = 1.0  # [1/s] upward velocity added per metre below the floor
    ground_alt: float = 0.0

    def __post_init__(self) -> None:
        if self.floor_alt <= self.ground_alt:
            raise ValueError("floor_alt must sit above ground_alt")
        if self.k_rep < 0.0:
            raise ValueError("k_rep must be non-negative")


@dataclass(frozen=True)
class SimState:
    """Pose, displayed attitude and bookkeeping of the simulated drone."""

    position: tuple[float, float, float] = (0.0, 0.0, 60.0)
    yaw: float = 0.0
    cmd: AttitudeCommand = AttitudeCommand()
    vel_cmd: VelocityCommand = VelocityCommand(12.0, 0.0, 0.0)
    t: float = 0.0
    crashed_count: int = 0


@dataclass(frozen=True)
class GimbalPose:
    """Camera pitch/yaw relative to the velocity-aligned frame [rad]."""

    pitch: float = 0.0
    yaw: float = 0.0


@dataclass(frozen=True)
class PlatformFeedback:
    """What the motion platform renders: attitude tilt and fan speed."""

    roll: float
    pitch: float
    airspeed: float


def apply_altitude_repulsion(z: float, v_z: float, safety: SafetyConfig) -> float:
    """Add upward velocity proportional to penetration below the floor.

    Continuous at the floor: exactly at floor_alt nothing is added.
    """
    if z >= safety.floor_alt:
        return v_z
    return v_z + safety.k_rep * (safety.floor_alt - z)


def step(
    s: SimState,
    cmd: AttitudeCommand,
    dt: float,
    params: MimicParams,
    safety: SafetyConfig,
) -> SimState:
    """Advance the drone one fixed step under an attitude command.

    The vertical channel may be altered by the altitude repulsion; the
    heading only ever changes through the yaw law, never through v_z.
    """
    if not (0.0 < dt <= 0.1):
        raise ValueError("dt must lie in (0, 0.1]")
    vel = mimic_velocity(cmd, params)
    x, y, z = s.position
    v_z = apply_altitude_repulsion(z, vel.v_z, safety)
    psi = wrap_angle(s.yaw + yaw_rate(vel, params) * dt)
    cos_p, sin_p = math.cos(psi), math.sin(psi)
    moved = VelocityCommand(vel.v_x, vel.v_y, v_z)
    return replace(
        s,
        position=(
            x + (cos_p * vel.v_x - sin_p * vel.v_y) * dt,
            y + (sin_p * vel.v_x + cos_p * vel.v_y) * dt,
            z + v_z * dt,
        ),
        yaw=psi,
        cmd=cmd,
        vel_cmd=moved,
        t=s.t + dt,
    )


def detect_crash(s: SimState, safety: SafetyConfig) -> bool:
    """True once the drone is at or below the crash plane."""
    return s.position[2] <= safety.ground_alt


class CourseComplete(Exception):
    """Raised when a respawn is requested past the last waypoint."""


def respawn(
    course: "Course",
    next_idx: int,
    params: MimicParams,
    prev: SimState | None = None,
    respawn_dist: float = 40.0,
) -> SimState:
    """Reposition in front of waypoint next_idx, level and aligned.

    The drone is placed respawn_dist metres short of the waypoint along
    the incoming segment direction, heading along it, attitude zeroed.
    Deterministic: equal inputs give equal states.
    """
    if not (0 <= next_idx < len(course.waypoints)):
        raise CourseComplete(f"no waypoint {next_idx} to respawn at")
    target = course.waypoints[next_idx].center
    before = course.waypoints[next_idx - 1].center if next_idx > 0 else course.start
    dx, dy, dz = (target[i] - before[i] for i in range(3))
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    ux, uy, uz = dx / norm, dy / norm, dz / norm
    level = AttitudeCommand()
    return SimState(
        position=(
            target[0] - respawn_dist * ux,
            target[1] - respawn_dist * uy,
            target[2] - respawn_dist * uz,
        ),
        yaw=math.atan2(uy, ux),
        cmd=level,
        vel_cmd=mimic_velocity(level, params),
        t=prev.t if prev is not None else 0.0,
        crashed_count=(prev.crashed_count + 1) if prev is not None else 0,
    )


def gimbal_pose(vel: VelocityCommand, head_pitch: float = 0.0, head_yaw: float = 0.0) -> GimbalPose:
    """Camera pose: climb-angle alignment plus the pilot's head offsets."""
    return GimbalPose(
        pitch=_clamp(climb_angle(vel) + head_pitch, -math.pi / 2, math.pi / 2),
        yaw=head_yaw,
    )


def feedback(s: SimState, params: MimicParams) -> PlatformFeedback:
    """Platform tilt and fan speed: the virtual fixed-wing's attitude and cruise speed.

    The displayed attitude is the commanded one -- the quadcopter's own
    attitude loop is abstracted away.
    """
    return PlatformFeedback(roll=s.cmd.phi_ref, pitch=s.cmd.theta_ref, airspeed=params.v)

"""Pilot input to attitude command: hand gestures or stick, two strategies.

Two front ends produce a normalized Deflection: tilting both hands the
same way pitches, tilting them opposite ways rolls; an RC-style stick
passes through directly.  Two strategies turn the deflection into an
attitude: the direct one commands an angle ("Stabilize" style), the
rate one commands an angular velocity that the attitude integrates
("Acro" style).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .mimicry import AttitudeCommand, MimicParams, _clamp


@dataclass(frozen=True)
class HandPose:
    """Pronation/supination angle of each hand [rad]; positive tilts the leading edge up."""

    left: float = 0.0
    right: float = 0.0


@dataclass(frozen=True)
class Deflection:
    """Normalized input axes in [-1, 1]."""

    pitch_axis: float = 0.0
    roll_axis: float = 0.0


@dataclass(frozen=True)
class RateStrategyState:
    """Integrated attitude and current angular rates of the rate strategy."""

    phi: float = 0.0
    theta: float = 0.0
    rate_phi: float = 0.0
    rate_theta: float = 0.0

    def attitude(self) -> AttitudeCommand:
        return AttitudeCommand(phi_ref=self.phi, theta_ref=self.theta)


@dataclass(frozen=True)
class MappingConfig:
    """Gains of the input mappings (none are given by the platform; all config-exposed).

    hand_full_scale: hand angle that saturates an axis [rad]
    rate_max_roll/pitch: angular velocity at full deflection [rad/s]
    rate_tau: first-order lag of the rate response [s]
    deadband: axis magnitude below which input reads as zero
    """

    hand_full_scale: float = math.radians(30.0)
    rate_max_roll: float = math.radians(60.0)
    rate_max_pitch: float = math.radians(60.0)
    rate_tau: float = 0.3
    deadband: float = 0.05

    def __post_init__(self) -> None:
        if self.hand_full_scale <= 0 or self.rate_tau <= 0:
            raise ValueError("hand_full_scale and rate_tau must be positive")
        if not (0.0 <= self.deadband < 0.2):
            raise ValueError("deadband must lie in [0, 0.2)")


def _deadbanded(x: float, deadband: float) -> float:
    return 0.0 if abs(x) <= deadband else x


def hands_to_deflection(pose: HandPose, cfg: MappingConfig) -> Deflection:
    """Decompose hand tilts: mean angle pitches, half-difference rolls.

    Both hands up = pitch up; right up / left down = roll toward the
    positive axis.
    """
    pitch = _clamp((pose.left + pose.right) / (2.0 * cfg.hand_full_scale), -1.0, 1.0)
    roll = _clamp((pose.right - pose.left) / (2.0 * cfg.hand_full_scale), -1.0, 1.0)
    return Deflection(
        pitch_axis=_deadbanded(pitch, cfg.deadband),
        roll_axis=_deadbanded(roll, cfg.deadband),
    )


def stick_to_deflection(stick_x: float, stick_y: float, cfg: MappingConfig) -> Deflection:
    """Right-stick pass-through: x is roll, y is pitch, deadband applied."""
    return Deflection(
        pitch_axis=_deadbanded(_clamp(stick_y, -1.0, 1.0), cfg.deadband),
        roll_axis=_deadbanded(_clamp(stick_x, -1.0, 1.0), cfg.deadband),
    )


def attitude_strategy(d: Deflection, params: MimicParams) -> AttitudeCommand:
    """Memoryless direct mapping: full deflection commands the clamp angle."""
    return AttitudeCommand(
        phi_ref=d.roll_axis * params.phi_max,
        theta_ref=d.pitch_axis * params.theta_max,
    )


def rate_strategy_step(
    d: Deflection,
    s: RateStrategyState,
    dt: float,
    cfg: MappingConfig,
    params: MimicParams,
) -> RateStrategyState:
    """Advance the rate strategy one step.

    Deflection sets a target angular rate; the rate relaxes toward it
    with a first-order lag (exact exponential update, so the discrete
    response matches the analytic one at any dt); the angle integrates
    the rate and clamps at the attitude stops, where the residual rate
    is zeroed so releasing the stick does not overshoot.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    decay = math.exp(-dt / cfg.rate_tau)

    def axis(angle: float, rate: float, target_rate: float, max_angle: float) -> tuple[float, float]:
        rate = target_rate + (rate - target_rate) * decay
        angle = angle + rate * dt
        if angle <= -max_angle:
            return -max_angle, 0.0
        if angle >= max_angle:
            return max_angle, 0.0
        return angle, rate

    phi, rate_phi = axis(s.phi, s.rate_phi, d.roll_axis * cfg.rate_max_roll, params.phi_max)
    theta, rate_theta = axis(
        s.theta, s.rate_theta, d.pitch_axis * cfg.rate_max_pitch, params.theta_max
    )
    return replace(s, phi=phi, theta=theta, rate_phi=rate_phi, rate_theta=rate_theta)

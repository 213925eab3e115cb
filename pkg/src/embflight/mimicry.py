"""Fixed-wing mimicry math: attitude commands to quadcopter velocity commands.

A hovering drone is made to fly like a fixed-wing aircraft at constant
total speed v by converting the desired roll/pitch of the virtual
fixed-wing into a velocity command (v_x, v_y, v_z) in the semi-body
frame (earth axes rotated by the vehicle's yaw only).  An internal yaw
law turns the nose at a rate proportional to the sideslip angle, so a
constant roll produces a coordinated circular turn.

All angles are radians, speeds m/s.  Everything here is pure and
stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class MimicParams:
    """Constants of the mimicked fixed-wing and its command clamps.

    v:           cruise speed of the virtual fixed-wing [m/s]
    k:           gain of the internal yaw-rate law, tuned so turns feel
                 like a small fixed-wing airframe
    g:           gravitational acceleration [m/s^2]
    phi_max:     roll clamp [rad]; must stay below the singularity of the
                 turn coefficient, atan(pi*v*k/(2*g))
    theta_max:   pitch clamp [rad]; tan(theta_max) must not exceed
                 vz_frac_max so the vertical clamp is never the binding one
    vz_frac_max: bound on |v_z|/v
    vy_frac_max: bound on |v_y|/sqrt(v^2 - v_z^2)
    """

    v: float = 12.0
    k: float = 0.6
    g: float = 9.81
    phi_max: float = math.radians(45.0)
    theta_max: float = math.radians(26.0)
    vz_frac_max: float = 0.5
    vy_frac_max: float = 0.9

    def __post_init__(self) -> None:
        if self.v <= 0 or self.k <= 0 or self.g <= 0:
            raise ValueError("v, k and g must be positive")
        if not (0.0 < self.vz_frac_max < 1.0 and 0.0 < self.vy_frac_max < 1.0):
            raise ValueError("velocity fractions must lie in (0, 1)")
        # Keeps the outer tan argument of the turn coefficient below pi/2.
        phi_limit = math.atan(math.pi * self.v * self.k / (2.0 * self.g))
        if not (0.0 < self.phi_max < phi_limit):
            raise ValueError(
                f"phi_max must lie in (0, {phi_limit:.4f} rad) for v={self.v}, k={self.k}"
            )
        if not (0.0 < self.theta_max and math.tan(self.theta_max) <= self.vz_frac_max):
            raise ValueError("tan(theta_max) must not exceed vz_frac_max")


@dataclass(frozen=True)
class AttitudeCommand:
    """Desired roll/pitch of the virtual fixed-wing [rad]."""

    phi_ref: float = 0.0
    theta_ref: float = 0.0

    @classmethod
    def clamped(cls, phi_ref: float, theta_ref: float, params: MimicParams) -> "AttitudeCommand":
        """Construct with both angles clamped into the params box."""
        return cls(
            phi_ref=_clamp(phi_ref, -params.phi_max, params.phi_max),
            theta_ref=_clamp(theta_ref, -params.theta_max, params.theta_max),
        )

    def within(self, params: MimicParams) -> bool:
        return abs(self.phi_ref) <= params.phi_max and abs(self.theta_ref) <= params.theta_max


@dataclass(frozen=True)
class VelocityCommand:
    """Semi-body-frame velocity command [m/s]: x forward, y lateral, z up."""

    v_x: float
    v_y: float
    v_z: float

    def speed(self) -> float:
        return math.sqrt(self.v_x**2 + self.v_y**2 + self.v_z**2)

    def horizontal_speed(self) -> float:
        return math.hypot(self.v_x, self.v_y)


@dataclass(frozen=True)
class TurnGeometry:
    """Steady-turn radius [m] and turn rate [rad/s] for a constant roll."""

    radius: float
    turn_rate: float


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def vz_from_pitch(theta_ref: float, params: MimicParams) -> float:
    """Vertical velocity commanded by a pitch angle: tan(theta_ref) * v.

    Clamped to +/- vz_frac_max * v.  Positive means climb.
    """
    return _clamp(
        math.tan(theta_ref) * params.v,
        -params.vz_frac_max * params.v,
        params.vz_frac_max * params.v,
    )


def turn_coefficient(phi_ref: float, params: MimicParams) -> float:
    """Lateral-to-forward velocity ratio A = tan(tan(phi_ref) * g / (v * k)).

    Odd and strictly increasing on the clamp box.  Rejects out-of-clamp
    roll: the mapping layer guarantees the clamp, so a violation here is
    a bug upstream, not a runtime condition to absorb.
    """
    if abs(phi_ref) > params.phi_max:
        raise ValueError(f"phi_ref {phi_ref:.4f} outside clamp +/-{params.phi_max:.4f}")
    return math.tan(math.tan(phi_ref) * params.g / (params.v * params.k))


def mimic_velocity(cmd: AttitudeCommand, params: MimicParams) -> VelocityCommand:
    """Velocity command that makes a quadcopter fly the given fixed-wing attitude.

    v_z from the pitch angle, v_y from the roll angle through the turn
    coefficient A, v_x from the constant-speed constraint
    v^2 = v_x^2 + v_y^2 + v_z^2.  The lateral term uses
    sqrt(v^2 - v_z^2) * A / sqrt(1 + A^2), the unique form for which
    v_y = A * v_x holds together with the constant-speed constraint
    (see the regression test for the sqrt(1 + A) variant, which breaks
    it).  v_y and v_z are clamped right after their computation so every
    radicand stays non-negative.
    """
    v = params.v
    v_z = vz_from_pitch(cmd.theta_ref, params)
    a = turn_coefficient(cmd.phi_ref, params)
    h = math.sqrt(v * v - v_z * v_z)  # speed left for the horizontal plane
    v_y = _clamp(h * a / math.sqrt(1.0 + a * a), -params.vy_frac_max * h, params.vy_frac_max * h)
    v_x = math.sqrt(v * v - v_y * v_y - v_z * v_z)
    return VelocityCommand(v_x=v_x, v_y=v_y, v_z=v_z)


def unclamped_roll_limit(params: MimicParams) -> float:
    """Largest |phi_ref| at which the lateral clamp is still inactive.

    Beyond it v_y saturates at vy_frac_max of the horizontal budget and
    the closed-form turn relations (v_y = A * v_x, yaw rate * radius =
    horizontal speed) no longer hold.  With the defaults this sits near
    39.4 deg, inside the 45 deg roll clamp.
    """
    a_max = params.vy_frac_max / math.sqrt(1.0 - params.vy_frac_max**2)
    return min(
        math.atan(math.atan(a_max) * params.v * params.k / params.g), params.phi_max
    )


def yaw_rate(vel: VelocityCommand, params: MimicParams) -> float:
    """Yaw rate of the internal turn law: k * atan(v_y / v_x).

    v_x > 0 is structural (both velocity fractions are < 1), so a zero
    forward speed is asserted, not handled.
    """
    assert vel.v_x > 0.0, "forward speed must stay positive under the clamps"
    return params.k * math.atan(vel.v_y / vel.v_x)


def steady_turn_radius(phi_ref: float, params: MimicParams) -> float:
    """Radius of the coordinated turn at constant roll: v^2 / (g * tan|phi_ref|).

    Raises on zero roll -- straight flight has no finite radius.
    """
    if phi_ref == 0.0:
        raise ValueError("no finite turn radius for zero roll (straight flight)")
    if abs(phi_ref) > params.phi_max:
        raise ValueError(f"phi_ref {phi_ref:.4f} outside clamp +/-{params.phi_max:.4f}")
    return params.v**2 / (params.g * math.tan(abs(phi_ref)))


def turn_geometry(phi_ref: float, params: MimicParams) -> TurnGeometry:
    """Radius and turn rate (alpha_dot = v / R) of the steady turn."""
    r = steady_turn_radius(phi_ref, params)
    return TurnGeometry(radius=r, turn_rate=params.v / r)


def climb_angle(vel: VelocityCommand) -> float:
    """Flight-path climb angle: atan2(v_z, horizontal speed).

    The camera gimbal holds this pitch so the view faces the velocity
    vector.
    """
    return math.atan2(vel.v_z, vel.horizontal_speed())

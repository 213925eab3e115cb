"""How attitude commands become quadcopter velocity commands.

Sweeps roll and pitch through their clamps and plots the resulting
semi-body velocity components, the yaw rate, and the steady turn
radius.  The total speed stays pinned at the cruise speed everywhere:
the lateral and vertical channels only redistribute it.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import embflight as ef

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

params = ef.MimicParams()
rolls = np.linspace(-params.phi_max, params.phi_max, 400)
pitches = np.linspace(-params.theta_max, params.theta_max, 400)

# roll sweep at level pitch
vels = [ef.mimic_velocity(ef.AttitudeCommand(phi, 0.0), params) for phi in rolls]
v_x = [v.v_x for v in vels]
v_y = [v.v_y for v in vels]
psi_dot = [ef.yaw_rate(v, params) for v in vels]
speeds = [v.speed() for v in vels]

# pitch sweep at level roll
vels_p = [ef.mimic_velocity(ef.AttitudeCommand(0.0, th), params) for th in pitches]
v_z = [v.v_z for v in vels_p]

fig, axes = plt.subplots(2, 2, figsize=(11, 7))
deg = np.degrees(rolls)

axes[0, 0].plot(deg, v_x, label="$v_x$ forward")
axes[0, 0].plot(deg, v_y, label="$v_y$ lateral")
axes[0, 0].plot(deg, speeds, "k--", lw=1, label="total speed")
axes[0, 0].set_xlabel("roll command [deg]")
axes[0, 0].set_ylabel("velocity [m/s]")
axes[0, 0].legend()
axes[0, 0].set_title("roll redistributes speed into the lateral channel")

axes[0, 1].plot(deg, np.degrees(psi_dot))
axes[0, 1].set_xlabel("roll command [deg]")
axes[0, 1].set_ylabel("yaw rate [deg/s]")
axes[0, 1].set_title("turn law: lateral velocity drives the heading")

axes[1, 0].plot(np.degrees(pitches), v_z)
axes[1, 0].set_xlabel("pitch command [deg]")
axes[1, 0].set_ylabel("$v_z$ [m/s]")
axes[1, 0].set_title("pitch sets the climb rate (tan law, clamped)")

nonzero = rolls[np.abs(rolls) > math.radians(2)]
radii = [ef.steady_turn_radius(phi, params) for phi in nonzero]
axes[1, 1].plot(np.degrees(nonzero), radii)
axes[1, 1].set_xlabel("roll command [deg]")
axes[1, 1].set_ylabel("steady turn radius [m]")
axes[1, 1].set_yscale("log")
axes[1, 1].set_title("tighter bank, tighter circle")

fig.tight_layout()
path = os.path.join(OUT, "01_mimicry_response.png")
fig.savefig(path, dpi=120)

print(f"cruise speed held at {params.v} m/s across the whole clamp box:")
print(f"  max |speed - v| over the roll sweep = {max(abs(s - params.v) for s in speeds):.2e} m/s")
print(f"turn radius at 15 deg roll: {ef.steady_turn_radius(math.radians(15), params):.2f} m")
print(f"figure -> {path}")

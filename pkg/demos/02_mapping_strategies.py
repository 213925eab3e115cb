"""Direct-attitude vs angular-rate input mapping, side by side.

Feeds the same stick script through both strategies.  The direct
strategy answers a stick step with an attitude step; the rate strategy
ramps the attitude for as long as the stick is held, then freezes it
when released, which is why it takes longer to learn.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import embflight as ef

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

params = ef.MimicParams()
cfg = ef.MappingConfig()
dt = 0.02
t = np.arange(0, 12, dt)

# stick script: hold right, release, brief left correction, release
roll_axis = np.zeros_like(t)
roll_axis[(t >= 1) & (t < 4)] = 1.0
roll_axis[(t >= 6) & (t < 7)] = -0.5

attitude = []
rate = []
state = ef.RateStrategyState()
for axis in roll_axis:
    d = ef.Deflection(roll_axis=float(axis))
    attitude.append(ef.attitude_strategy(d, params).phi_ref)
    state = ef.rate_strategy_step(d, state, dt, cfg, params)
    rate.append(state.phi)

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 6), sharex=True)
ax1.plot(t, roll_axis, "k", lw=1)
ax1.set_ylabel("stick roll axis")
ax1.set_title("the same stick input through both strategies")

ax2.plot(t, np.degrees(attitude), label="direct attitude (stick = angle)")
ax2.plot(t, np.degrees(rate), label="angular rate (stick = rate, angle integrates)")
ax2.set_xlabel("time [s]")
ax2.set_ylabel("roll [deg]")
ax2.legend()

fig.tight_layout()
path = os.path.join(OUT, "02_mapping_strategies.png")
fig.savefig(path, dpi=120)

print("after releasing the stick at t = 4 s:")
idx = int(5.0 / dt)
print(f"  direct strategy roll: {np.degrees(attitude[idx]):6.2f} deg (snaps back to level)")
print(f"  rate strategy roll:   {np.degrees(rate[idx]):6.2f} deg (holds the integrated bank)")

# hand-gesture decomposition
h = cfg.hand_full_scale
for left, right, label in [(h, h, "both hands up"), (-h, h, "opposite tilt"), (h / 2, -h / 2, "half opposite")]:
    d = ef.hands_to_deflection(ef.HandPose(left, right), cfg)
    print(f"hands ({np.degrees(left):+.0f}, {np.degrees(right):+.0f}) deg -> pitch {d.pitch_axis:+.2f}, roll {d.roll_axis:+.2f}  ({label})")
print(f"figure -> {path}")

"""A full synthetic-pilot evaluation episode, with and without link delay.

Runs the pursuit pilot through the 84-waypoint course under both
mapping strategies, plots the flown trajectory over the clouds and the
20-waypoint moving average of the scores, and shows how injected
one-way latency erodes performance.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import embflight as ef

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

course = ef.generate_course(seed=0, count=84, spacing=40.0)
cfg = ef.EpisodeConfig()

reports = {
    "attitude": ef.run_episode("attitude", course, None, cfg),
    "rate": ef.run_episode("rate", course, None, cfg),
}
for name, rep in reports.items():
    print(
        f"{name:9s} strategy: mean {rep.mean_score:6.2f}% over {len(rep.records)} waypoints, "
        f"{rep.crashes} crashes, {rep.duration:.0f} s simulated"
    )

# re-fly the attitude episode step by step to draw the trajectory
state = ef.initial_state(course, cfg.mimic)
xs, ys = [state.position[0]], [state.position[1]]
tracker_idx = 0
from embflight.pilot import WaypointTracker, pursuit_command  # noqa: E402

tracker = WaypointTracker(course, cfg.scoring)
while not tracker.done and state.t < 600:
    d = pursuit_command(state, course, min(tracker.next_idx, course.count - 1), cfg.gains)
    cmd = ef.attitude_strategy(d, cfg.mimic)
    prev = state.position
    state = ef.step(state, cmd, cfg.dt, cfg.mimic, cfg.safety)
    tracker.update(prev, state.position, state.t)
    xs.append(state.position[0])
    ys.append(state.position[1])

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(13, 5.5))
pts = course.centers()
ax1.plot(pts[:, 0], pts[:, 1], "o", ms=5, mfc="none", color="gray", label="clouds")
ax1.plot(xs, ys, lw=1, label="flown path")
ax1.set_aspect("equal")
ax1.set_xlabel("east [m]")
ax1.set_ylabel("north [m]")
ax1.legend()
ax1.set_title("attitude-strategy pursuit through the course")

for name, rep in reports.items():
    scores = [r.score for r in rep.records]
    windowed = ef.windowed_performance(scores, window=20)
    ax2.plot(np.arange(len(windowed)) + 20, windowed, label=f"{name} strategy")
ax2.set_xlabel("waypoint")
ax2.set_ylabel("20-waypoint average score [%]")
ax2.set_ylim(0, 105)
ax2.legend()
ax2.set_title("windowed performance across the episode")

fig.tight_layout()
path = os.path.join(OUT, "06_pilot_episode.png")
fig.savefig(path, dpi=120)

print("\ninjected one-way latency vs attitude-pursuit score:")
for ms in (0, 50, 100, 200):
    link = (
        None
        if ms == 0
        else ef.LinkProfile(name=f"lat{ms}", base_latency=2.0 * ms, jitter=0.0, loss_prob=0.0)
    )
    rep = ef.run_episode("attitude", course, link, cfg)
    print(f"  {ms:3d} ms -> mean {rep.mean_score:8.4f}%")
print(f"figure -> {path}")

"""Telemetry link behaviour: round-trip latency and loss vs emission rate.

Sweeps the emission frequency for each device profile and reproduces
the survey axes (mean round trip, packet loss).  Past the usable
frequency the latency stays flat but the loss climbs, which is why the
session runs its command stream at 30 Hz.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import embflight as ef

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

freqs = list(range(5, 101, 5))
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))

for name, profile in ef.PROFILES.items():
    stats = [ef.measure_roundtrip(profile, f, n_packets=4000, seed=0) for f in freqs]
    ax1.plot(freqs, [s.mean_rtt for s in stats], "o-", ms=3, label=name)
    ax2.plot(freqs, [100 * s.loss_pct for s in stats], "o-", ms=3, label=name)

ax1.set_xlabel("emission frequency [Hz]")
ax1.set_ylabel("mean round trip [ms]")
ax1.set_title("latency is set by the device, not the rate")
ax1.legend()

ax2.axvline(30, ls=":", color="gray")
ax2.set_xlabel("emission frequency [Hz]")
ax2.set_ylabel("packet loss [%]")
ax2.set_title("loss climbs past the usable frequency (30 Hz chosen)")
ax2.legend()

fig.tight_layout()
path = os.path.join(OUT, "05_link_emulation.png")
fig.savefig(path, dpi=120)

print("at the 30 Hz operating point:")
for name, profile in ef.PROFILES.items():
    s = ef.measure_roundtrip(profile, 30.0, n_packets=50_000, seed=0)
    print(f"  {name:10s} mean RTT {s.mean_rtt:6.2f} ms   loss {100 * s.loss_pct:5.2f}%")

print("\nfeedback path budgets (50 ms for natural immersion):")
for label, comps in (("video", ef.VIDEO_PATH_MS), ("gimbal", ef.GIMBAL_PATH_MS)):
    rep = ef.latency_budget_check(comps, ef.VISUAL_BUDGET_MS)
    verdict = "PASS" if rep.passed else "FAIL"
    print(f"  {label:7s} {rep.total_ms:6.1f} ms vs {rep.budget_ms:.0f} ms -> {verdict}")
print(f"figure -> {path}")

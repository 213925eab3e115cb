"""Telemetry link emulation: latency, jitter, Bernoulli loss, FIFO delivery.

Each Link is one direction of the command/feedback channel.  The
profile's base latency is the round-trip floor of the device, so each
direction delays by half of it plus uniform jitter.  Above the
profile's usable emission frequency the loss probability grows, which
reproduces the measured behaviour of the real radios: past 20-30 Hz
the latency stays put but packets start disappearing.
"""

from __future__ import annotations

import csv
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class LinkProfile:
    """One emulated wireless device.

    base_latency: round-trip latency floor [ms]; halved per direction
    jitter: upper bound of the per-direction uniform jitter [ms]
    loss_prob: independent per-packet drop probability at or below max_freq
    max_freq: emission frequency [Hz] above which loss grows
    cmd_size/fb_size: payload sizes [bytes] of the two packet kinds
    """

    name: str
    base_latency: float
    jitter: float = 0.0
    loss_prob: float = 0.0
    max_freq: float = 30.0
    cmd_size: int = 21
    fb_size: int = 56

    def __post_init__(self) -> None:
        if self.base_latency < 0 or self.jitter < 0:
            raise ValueError("latency figures must be non-negative")
        if not (0.0 <= self.loss_prob < 1.0):
            raise ValueError("loss_prob must lie in [0, 1)")
        if self.cmd_size <= 0 or self.fb_size <= 0:
            raise ValueError("packet sizes must be positive")

    def effective_loss(self, freq_hz: float | None) -> float:
        """Loss probability at an emission frequency; grows past max_freq."""
        if freq_hz is None or freq_hz <= self.max_freq:
            return self.loss_prob
        return min(self.loss_prob * (1.0 + (freq_hz / self.max_freq - 1.0)), 1.0)


# Bench-measured device profiles.  The 3DR 915 MHz module is
# the default session link (chosen for robustness to obstacles); its
# round trip is set so that one hop plus the 48 ms video path lands at
# the observed ~100 ms head-to-display latency.  Xbee Wifi carries the
# measured 56.5 ms floor; it was out of range at 100 m so no loss figure
# exists and it is emulated lossless.  Xbee Pro's latency floor is a
# declared placeholder -- only its loss was measured.
PROFILES: dict[str, LinkProfile] = {
    "xbee-wifi": LinkProfile(name="xbee-wifi", base_latency=56.5, jitter=0.0, loss_prob=0.0),
    "xbee-pro": LinkProfile(name="xbee-pro", base_latency=80.0, jitter=4.0, loss_prob=0.026),
    "3dr-915": LinkProfile(name="3dr-915", base_latency=104.0, jitter=4.0, loss_prob=0.020),
}

DEFAULT_PROFILE = "3dr-915"

# Bench-measured display-path latencies [ms]: the FPV
# camera-to-goggles path measured 48 ms, within the 50 ms budget for
# natural immersion; the head-motion-to-gimbal-view path stacks the
# radio hop on top of the video path and lands around 100 ms, a known
# budget violation.
VIDEO_DISPLAY_LATENCY_MS = 48.0
VISUAL_BUDGET_MS = 50.0
HAPTIC_BUDGET_MS = 50.0
VIDEO_PATH_MS = (VIDEO_DISPLAY_LATENCY_MS,)
GIMBAL_PATH_MS = (PROFILES["3dr-915"].base_latency / 2.0, VIDEO_DISPLAY_LATENCY_MS)


@dataclass
class Packet:
    seq: int
    kind: str  # "command" | "feedback"
    payload_size: int
    sent_at: float
    deliver_at: float | None  # None when dropped
    payload: Any = None


@dataclass(frozen=True)
class LatencyStats:
    mean_rtt: float  # [ms]
    p95_rtt: float  # [ms]
    loss_pct: float  # fraction in [0, 1]
    freq: float  # [Hz]


@dataclass(frozen=True)
class BudgetReport:
    total_ms: float
    budget_ms: float
    passed: bool
    components_ms: tuple[float, ...] = ()


class Link:
    """One direction of the emulated link: seeded loss, delayed FIFO delivery."""

    def __init__(
        self,
        profile: LinkProfile,
        kind: str = "command",
        seed: int = 0,
        freq_hz: float | None = None,
    ) -> None:
        self.profile = profile
        self.kind = kind
        self._rng = random.Random(seed)
        self._loss = profile.effective_loss(freq_hz)
        self._queue: deque[Packet] = deque()
        self._seq = 0
        self._last_deliver = -math.inf
        self.sent = 0
        self.dropped = 0

    def _payload_size(self) -> int:
        return self.profile.cmd_size if self.kind == "command" else self.profile.fb_size

    def send(self, payload: Any, now: float) -> Packet:
        """Queue a packet for delayed delivery (or drop it).

        One-way delay is half the round-trip floor plus uniform jitter;
        delivery times are forced non-decreasing so a direction never
        reorders.
        """
        self._seq += 1
        self.sent += 1
        pkt = Packet(
            seq=self._seq,
            kind=self.kind,
            payload_size=self._payload_size(),
            sent_at=now,
            deliver_at=None,
            payload=payload,
        )
        if self._rng.random() < self._loss:
            self.dropped += 1
            return pkt
        delay_s = (self.profile.base_latency / 2.0 + self._rng.uniform(0.0, self.profile.jitter)) / 1000.0
        deliver = max(now + delay_s, self._last_deliver)
        self._last_deliver = deliver
        pkt.deliver_at = deliver
        self._queue.append(pkt)
        return pkt

    def poll(self, now: float) -> list[Packet]:
        """Consume every packet due by now, in delivery order."""
        out = []
        while self._queue and self._queue[0].deliver_at <= now:
            out.append(self._queue.popleft())
        return out


def measure_roundtrip(
    profile: LinkProfile,
    freq: float,
    n_packets: int = 10_000,
    seed: int = 0,
) -> LatencyStats:
    """Emit commands at a fixed rate, echo each delivery as feedback, time the loop.

    RTT is feedback reception minus command emission; loss is counted
    over every packet sent in either direction.
    """
    if freq <= 0:
        raise ValueError("emission frequency must be positive")
    cmd = Link(profile, kind="command", seed=seed, freq_hz=freq)
    fb = Link(profile, kind="feedback", seed=seed + 1, freq_hz=freq)
    for i in range(n_packets):
        cmd.send(payload=i / freq, now=i / freq)
    # Drain and echo; FIFO makes a single pass sufficient.
    for pkt in cmd.poll(math.inf):
        fb.send(payload=pkt.payload, now=pkt.deliver_at)
    rtts = [pkt.deliver_at - pkt.payload for pkt in fb.poll(math.inf)]
    total_sent = cmd.sent + fb.sent
    loss = (cmd.dropped + fb.dropped) / total_sent if total_sent else 0.0
    if rtts:
        arr = np.asarray(rtts) * 1000.0
        mean, p95 = float(arr.mean()), float(np.percentile(arr, 95))
    else:
        mean = p95 = math.nan
    return LatencyStats(mean_rtt=mean, p95_rtt=p95, loss_pct=loss, freq=freq)


def latency_budget_check(path_latencies_ms, budget_ms: float) -> BudgetReport:
    """Sum a path's component latencies against its budget."""
    if budget_ms <= 0:
        raise ValueError("budget must be positive")
    comps = tuple(float(x) for x in path_latencies_ms)
    total = sum(comps)
    return BudgetReport(
        total_ms=total, budget_ms=budget_ms, passed=total <= budget_ms, components_ms=comps
    )


def write_latency_csv(path, stats) -> None:
    """Frequency-sweep CSV: freq_hz, mean_rtt_ms, p95_rtt_ms, loss_pct."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["freq_hz", "mean_rtt_ms", "p95_rtt_ms", "loss_pct"])
        for s in stats:
            w.writerow([s.freq, s.mean_rtt, s.p95_rtt, s.loss_pct])

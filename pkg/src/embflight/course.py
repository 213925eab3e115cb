"""Waypoint course generation, crossing detection and Gaussian scoring.

A course is a seeded random walk of waypoints at varying headings and
altitudes.  Each waypoint carries a crossing plane perpendicular to the
previous->next direction; performance is 100% at the plane centre and
decays with a Gaussian whose width is fixed by the distance at which
the score reaches its floor (1% at 38.4 m).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .flightsim import SimState

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class Waypoint:
    center: Vec3
    index: int


@dataclass(frozen=True)
class CourseGenParams:
    """Knobs of the course random walk.

    Heading turns per segment are uniform within +/-heading_jitter;
    altitude steps are uniform within +/-alt_jitter and clamped to
    alt_band; spacing is jittered +/-spacing_jitter_frac.  Defaults keep
    every segment flyable at cruise speed within the roll clamp.
    """

    heading_jitter: float = math.radians(45.0)
    alt_jitter: float = 10.0
    alt_band: tuple[float, float] = (30.0, 150.0)
    spacing_jitter_frac: float = 0.1
    start_alt: float = 60.0


@dataclass(frozen=True)
class Course:
    waypoints: tuple[Waypoint, ...]
    seed: int
    spacing: float
    count: int
    start: Vec3

    def centers(self) -> np.ndarray:
        return np.array([w.center for w in self.waypoints])

    def path_length(self) -> float:
        """Total 3D length from the start anchor through every waypoint."""
        pts = np.vstack([np.array(self.start), self.centers()])
        return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "spacing_m": self.spacing,
            "start_m": list(self.start),
            "waypoints_m": [list(w.center) for w in self.waypoints],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Course":
        return cls(
            waypoints=tuple(
                Waypoint(center=tuple(c), index=i) for i, c in enumerate(d["waypoints_m"])
            ),
            seed=d["seed"],
            spacing=d["spacing_m"],
            count=d["count"],
            start=tuple(d["start_m"]),
        )


@dataclass(frozen=True)
class CrossingPlane:
    """Plane through a waypoint centre, normal along previous->next."""

    point: Vec3
    normal: Vec3


@dataclass(frozen=True)
class ScoreRecord:
    waypoint_index: int
    t: float
    distance: float
    score: float
    crashed_before: bool = False


@dataclass(frozen=True)
class ScoringParams:
    """Gaussian score shape, parameterized by its floor crossing.

    sigma is always derived from (d_floor, p_floor) so the floor anchor
    holds by construction: score(d_floor) = 100 * p_floor.
    """

    d_floor: float = 38.4
    p_floor: float = 0.01
    sigma: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.d_floor > 0 and 0 < self.p_floor < 1):
            raise ValueError("need d_floor > 0 and p_floor in (0, 1)")
        object.__setattr__(
            self, "sigma", self.d_floor / math.sqrt(2.0 * math.log(1.0 / self.p_floor))
        )


def generate_course(
    seed: int,
    count: int = 84,
    spacing: float = 40.0,
    gen_params: CourseGenParams = CourseGenParams(),
) -> Course:
    """Seeded waypoint random walk; identical seeds give identical courses."""
    if count < 2:
        raise ValueError("a course needs at least two waypoints")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    rng = np.random.default_rng(seed)
    heading = 0.0
    x, y, z = 0.0, 0.0, gen_params.start_alt
    start = (x, y, z)
    lo, hi = gen_params.alt_band
    waypoints = []
    for i in range(count):
        heading += rng.uniform(-gen_params.heading_jitter, gen_params.heading_jitter)
        dist = spacing * (
            1.0 + rng.uniform(-gen_params.spacing_jitter_frac, gen_params.spacing_jitter_frac)
        )
        x += dist * math.cos(heading)
        y += dist * math.sin(heading)
        z = min(max(z + rng.uniform(-gen_params.alt_jitter, gen_params.alt_jitter), lo), hi)
        waypoints.append(Waypoint(center=(x, y, z), index=i))
    return Course(waypoints=tuple(waypoints), seed=seed, spacing=spacing, count=count, start=start)


def _unit_diff(a: Vec3, b: Vec3) -> Vec3 | None:
    d = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
    n = math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
    if n == 0.0:
        return None
    return (d[0] / n, d[1] / n, d[2] / n)


def crossing_plane(course: Course, i: int) -> CrossingPlane:
    """Plane of waypoint i, normal along previous->next.

    Endpoints use their single adjacent segment; a degenerate
    previous == next pair falls back to previous->current.
    """
    wps = course.waypoints
    if not (0 <= i < len(wps)):
        raise IndexError(f"waypoint {i} out of range")
    prev = wps[i - 1].center if i > 0 else wps[0].center
    nxt = wps[i + 1].center if i < len(wps) - 1 else wps[-1].center
    if i == 0:
        prev, nxt = wps[0].center, wps[1].center
    elif i == len(wps) - 1:
        prev, nxt = wps[-2].center, wps[-1].center
    normal = _unit_diff(prev, nxt)
    if normal is None:
        normal = _unit_diff(prev, wps[i].center)
    if normal is None:
        raise ValueError(f"cannot orient crossing plane at waypoint {i}")
    return CrossingPlane(point=wps[i].center, normal=normal)


def check_crossing(p_prev: Vec3, p_new: Vec3, plane: CrossingPlane) -> float | None:
    """In-plane miss distance if the segment crosses front-to-back, else None.

    Front-to-back means the signed plane distance goes from negative to
    non-negative, so loop-backs through the plane never double-score.
    """
    n = plane.normal
    c = plane.point
    s_prev = sum((p_prev[i] - c[i]) * n[i] for i in range(3))
    s_new = sum((p_new[i] - c[i]) * n[i] for i in range(3))
    if not (s_prev < 0.0 <= s_new):
        return None
    frac = s_prev / (s_prev - s_new)
    hit = tuple(p_prev[i] + frac * (p_new[i] - p_prev[i]) for i in range(3))
    return math.sqrt(sum((hit[i] - c[i]) ** 2 for i in range(3)))


def plane_distance(pos: Vec3, plane: CrossingPlane) -> float:
    """In-plane distance from a position's projection to the plane centre."""
    n, c = plane.normal, plane.point
    d = tuple(pos[i] - c[i] for i in range(3))
    along = sum(d[i] * n[i] for i in range(3))
    in_plane = tuple(d[i] - along * n[i] for i in range(3))
    return math.sqrt(sum(v * v for v in in_plane))


def score_fn(distance: float, p: ScoringParams = ScoringParams()) -> float:
    """Gaussian performance in percent: 100 at the centre, p_floor*100 at d_floor."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    return 100.0 * math.exp(-(distance**2) / (2.0 * p.sigma**2))


def windowed_performance(scores: Sequence[float], window: int = 20) -> np.ndarray:
    """Trailing moving average; empty when there are fewer scores than the window."""
    if window < 1:
        raise ValueError("window must be at least 1")
    arr = np.asarray(scores, dtype=float)
    if arr.size < window:
        return np.empty(0)
    kernel = np.ones(window) / window
    return np.convolve(arr, kernel, mode="valid")


def outlier_threshold(distances: Iterable[float]) -> float:
    """Mean plus 2.5 sample standard deviations of the miss distances."""
    arr = np.asarray(list(distances), dtype=float)
    if arr.size < 2:
        raise ValueError("outlier threshold needs at least two distances")
    return float(arr.mean() + 2.5 * arr.std(ddof=1))


def next_waypoint_direction(state: SimState, course: Course, i: int) -> tuple[Vec3, Vec3]:
    """Unit direction to waypoint i, in world axes and in the body-yaw frame.

    The body-frame vector drives the UI arrow.  Returns zero vectors
    when the drone sits exactly on the centre.
    """
    c = course.waypoints[i].center
    d = tuple(c[j] - state.position[j] for j in range(3))
    n = math.sqrt(sum(v * v for v in d))
    if n == 0.0:
        zero = (0.0, 0.0, 0.0)
        return zero, zero
    world = (d[0] / n, d[1] / n, d[2] / n)
    cos_p, sin_p = math.cos(-state.yaw), math.sin(-state.yaw)
    body = (
        cos_p * world[0] - sin_p * world[1],
        sin_p * world[0] + cos_p * world[1],
        world[2],
    )
    return world, body


def write_score_csv(path, records: Iterable[ScoreRecord]) -> None:
    """Per-waypoint CSV: index, t, distance_m, score_pct, crashed_before."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["index", "t", "distance_m", "score_pct", "crashed_before"])
        for r in records:
            w.writerow([r.waypoint_index, r.t, r.distance, r.score, int(r.crashed_before)])

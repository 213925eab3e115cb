"""The waypoint-cloud task: course shape, crossing planes, Gaussian score.

Generates the standard 84-waypoint evaluation course and shows the
scoring function that turns a miss distance at each crossing plane into
a performance percentage.
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
pts = course.centers()

fig = plt.figure(figsize=(12, 5))
ax = fig.add_subplot(1, 2, 1, projection="3d")
ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], ".-", ms=4, lw=0.8)
ax.scatter(*course.start, color="g", s=40, label="start")
ax.set_xlabel("east [m]")
ax.set_ylabel("north [m]")
ax.set_zlabel("alt [m]")
ax.legend()
ax.set_title(f"seed-0 course: {course.count} clouds, path {course.path_length():.0f} m")

ax2 = fig.add_subplot(1, 2, 2)
scoring = ef.ScoringParams()
d = np.linspace(0, 60, 600)
ax2.plot(d, [ef.score_fn(x, scoring) for x in d])
ax2.axvline(scoring.sigma, ls=":", color="gray", label=f"sigma = {scoring.sigma:.2f} m")
ax2.axvline(scoring.d_floor, ls="--", color="r", label=f"1% floor at {scoring.d_floor} m")
ax2.set_xlabel("miss distance at the crossing plane [m]")
ax2.set_ylabel("score [%]")
ax2.legend()
ax2.set_title("Gaussian performance: centre hit = 100%")

fig.tight_layout()
path = os.path.join(OUT, "04_course_and_scoring.png")
fig.savefig(path, dpi=120)

print(f"score at the centre:        {ef.score_fn(0.0, scoring):7.3f}%")
print(f"score at one sigma:         {ef.score_fn(scoring.sigma, scoring):7.3f}%")
print(f"score at the 38.4 m floor:  {ef.score_fn(38.4, scoring):7.3f}%")
misses = [3.0, 3.5, 2.0, 40.0, 4.0]
print(f"outlier threshold for miss set {misses}: {ef.outlier_threshold(misses):.2f} m")
print(f"figure -> {path}")

"""The idealized crossing model and its analytical safety margin.

A crossing agent traverses a road of width ``l`` at constant speed while
an obstacle approaches with constant acceleration.  The analytical check
compares the obstacle's displacement over the whole crossing time with
its current distance; the margin is that ratio, and values below one are
safe.  A brute-force time-stepped integration (with the obstacle's speed
clamped at zero, since vehicles do not reverse) validates the formula
and exposes where the two disagree for braking obstacles.

Run:  python demos/02_crossing_safety_check.py
"""

import numpy as np

from crossrisk import CrossingModel, kinematic_safety_check, numeric_collision_check, time_to_cross

model = CrossingModel(road_width=3.0, crossing_speed=1.0)
print(f"road width {model.road_width} m at {model.crossing_speed} m/s "
      f"-> crossing takes {time_to_cross(model):.1f} s")

print()
print("=== analytical margin on a few situations ===")
cases = [
    ("distant slow car", 10.0, 2.0, 0.0),
    ("same car, closer", 5.0, 2.0, 0.0),
    ("stationary obstacle", 2.0, 0.0, 0.0),
    ("accelerating from far", 15.0, 1.0, 1.5),
]
for label, d, v, a in cases:
    check = kinematic_safety_check(model, d, v, a)
    verdict = "safe" if check.safe else "UNSAFE"
    print(f"  {label:22s} d={d:5.1f} v={v:3.1f} a={a:3.1f} -> margin {check.margin:5.2f} ({verdict})")

print()
print("=== brute force agrees wherever speed and acceleration are non-negative ===")
rng = np.random.default_rng(2)
disagreements = 0
for _ in range(2000):
    d = float(rng.uniform(0.5, 20.0))
    v = float(rng.uniform(0.0, 3.0))
    a = float(rng.uniform(0.0, 3.0))
    analytical = kinematic_safety_check(model, d, v, a)
    if abs(analytical.margin - 1.0) <= 1e-6:
        continue
    if numeric_collision_check(model, d, v, a) != analytical.safe:
        disagreements += 1
print(f"  2000 random non-negative cases: {disagreements} disagreements")

print()
print("=== braking obstacles: where the endpoint formula is optimistic ===")
# The obstacle overshoots the pedestrian's line while still moving, then
# the unclamped endpoint expression lets it "back away" before the
# crossing completes.  The clamped integration catches the collision.
d, v, a = 1.0, 2.0, -1.2
check = kinematic_safety_check(model, d, v, a)
brute = numeric_collision_check(model, d, v, a)
print(f"  d={d} m, v={v} m/s, a={a} m/s^2")
print(f"  analytical endpoint margin: {check.margin:.2f} -> {'safe' if check.safe else 'unsafe'}")
print(f"  clamped integration:        {'safe' if brute else 'UNSAFE'}")
print(f"  stopping distance v^2/(2|a|) = {v * v / (2 * abs(a)):.2f} m >= {d} m, so it hits first")

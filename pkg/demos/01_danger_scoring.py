"""How the danger score reacts to distance, speed and acceleration.

The score is a ratio: a normalized speed term plus a down-weighted
normalized acceleration term, over a log-compressed distance.  This
script walks through the two input transforms, sweeps the score over a
closing obstacle, and shows where the go/no-go threshold trips.

Run:  python demos/01_danger_scoring.py
"""

import numpy as np

from crossrisk import DangerParams, accel_transform, danger_value, decide, speed_transform

params = DangerParams()

print("=== speed transform ===")
print("dead band below", params.speed_deadband, "m/s, saturates at", params.speed_saturation, "m/s")
for v in (0.0, 0.05, 0.20, 0.35, 0.65, 1.50):
    print(f"  closing speed {v:4.2f} m/s -> {speed_transform(v, params):5.3f}")

print()
print("=== acceleration transform ===")
print("dead band |a| <=", params.accel_deadband, "m/s^2, saturates at", params.accel_saturation)
for a in (-12.0, -5.5, -1.0, 0.0, 1.0, 5.5, 12.0):
    print(f"  acceleration {a:6.2f} m/s^2 -> {accel_transform(a, params):6.3f}")

print()
print("=== score vs distance (obstacle closing at 0.65 m/s, no acceleration) ===")
print("the log-compressed denominator makes nearby obstacles dominate:")
for d in (5.0, 3.0, 2.0, 1.5, 1.0, 0.6):
    g = danger_value(d, 0.65, 0.0, params)
    print(f"  d = {d:4.1f} m -> g = {g:7.4f}  [{decide(g, params).value}]")

print()
print("=== a braking obstacle can even score negative ===")
g = danger_value(2.0, 0.0, -10.0, params)
print(f"  d = 2.0 m, v = 0, a = -10 m/s^2 -> g = {g:+.4f}  [{decide(g, params).value}]")

print()
print("=== threshold sweep: when does an approach at 0.5 m/s become dangerous? ===")
distances = np.linspace(4.0, 0.5, 8)
for d in distances:
    g = danger_value(float(d), 0.5, 0.0, params)
    marker = "<-- crossing not recommended" if g > params.threshold else ""
    print(f"  d = {d:4.2f} m -> g = {g:6.3f} {marker}")

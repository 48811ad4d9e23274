"""The command-line workflow and its file formats, end to end.

Writes a scenario description, then drives the installed CLI:

    crossrisk simulate  -> sensor recording CSV
    crossrisk ingest    -> availability summary
    crossrisk fuse      -> per-instant decision trace CSV
    crossrisk evaluate  -> metrics table / JSON
    crossrisk plotdata  -> long-format CSV for external plotting

Everything is seeded, so rerunning reproduces the same bytes.

Run:  python demos/04_cli_workflow.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args: str) -> str:
    cmd = [sys.executable, "-m", "crossrisk", *args]
    print(f"$ crossrisk {' '.join(args)}")
    result = subprocess.run(cmd, capture_output=True, text=True, check=True)
    if result.stderr:
        print(result.stderr, end="")
    return result.stdout


workdir = Path(tempfile.mkdtemp(prefix="crossrisk_demo_"))
scenario = workdir / "scenario.json"
scenario.write_text(
    json.dumps(
        {
            "duration": 6.0,
            "initial_distance": 4.0,
            "initial_speed": 0.7,
            "segments": [[2.5, 0.2], [2.0, -0.6], [1.5, 0.0]],
            "seed": 20240517,
            "sensors": {"camera_drone": {"detection_range": 2.0}},
        },
        indent=2,
    )
)
print(f"working in {workdir}\n")

sensors = workdir / "sensors.csv"
run("simulate", str(scenario), str(sensors))
print("recording header + first rows:")
print("\n".join(sensors.read_text().splitlines()[:4]))
print("(empty fields are instants where a sensor produced nothing)\n")

print(run("ingest", str(sensors)))

fused = workdir / "fused.csv"
run("fuse", str(sensors), str(fused))
lines = fused.read_text().splitlines()
print("decision trace header:")
print(lines[0])
print("a mid-run row:")
print(lines[len(lines) // 2])
print()

print(run("evaluate", str(sensors)))

out = run("evaluate", "--json", str(sensors))
rows = json.loads(out)
best_rmse = min((r for r in rows if r["rmse"] is not None), key=lambda r: r["rmse"])
print(f"lowest RMSE source: {best_rmse['source']} ({best_rmse['rmse']:.3f})\n")

plot = workdir / "plot.csv"
run("plotdata", str(fused), str(plot))
print("long-format rows ready for any plotting tool:")
print("\n".join(plot.read_text().splitlines()[:4]))
print("...")
print(f"\nartifacts left in {workdir}")

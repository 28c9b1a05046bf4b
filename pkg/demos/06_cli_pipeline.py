"""The command-line pipeline: gen -> fit -> canon -> eval.

Runs the installed CLI end to end in a temporary directory, exactly as a
shell user would: synthesize a cloud from ground-truth parameters, fit it,
canonicalize the fit, and score it against the ground truth.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp(prefix="sqkit_demo_"))
print("working in", work)

gt = {
    "schema_version": 1,
    "eps": [0.3, 0.8],
    "scale": [0.03, 0.05, 0.09],
    "euler_xyz": [0.2, -0.4, 0.6],  # Euler input is accepted and normalized
    "translation": [0.02, 0.0, 0.1],
}
gt_path = work / "gt.json"
gt_path.write_text(json.dumps(gt, indent=2))


def run(*args):
    cmd = [sys.executable, "-m", "sqkit.cli", *args]
    print("\n$ sqkit " + " ".join(args))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.stdout:
        print(proc.stdout.rstrip())
    if proc.returncode != 0:
        print(proc.stderr.rstrip())
        raise SystemExit(proc.returncode)
    return proc


cloud = work / "cloud.ply"
run("gen", "--params", str(gt_path), "--n", "2000", "--noise", "0.0005",
    "--visible", "0.9", "--seed", "11", "--output", str(cloud))

fit_params = work / "fit.json"
run("fit", "--input", str(cloud), "--output", str(fit_params))

canon_params = work / "canon.json"
run("canon", "--params", str(fit_params), "--output", str(canon_params))

report = work / "report.json"
run("eval", "--gt", str(gt_path), "--est", str(canon_params),
    "--thresholds", "0.001,0.002,0.005", "--output", str(report))
print("\nevaluation report:")
print(report.read_text())

run("grid", "--list")

#!/usr/bin/env python3
"""Plot the artifacts written by `covert solve` and `covert sweep`.

    plot.py solve out/solve          -> trajectory.png, convergence.png
    plot.py sweep out/sweep          -> sweep.png
"""
import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_solve(run: Path) -> None:
    traj = pd.read_csv(run / "trajectory.csv")
    manifest = json.loads((run / "manifest.json").read_text())
    trace = json.loads((run / "trace.json").read_text())
    scn = manifest["scenario"]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(traj.x_s, traj.y_s, "o-", ms=3, label="S")
    ax.plot(traj.x_j, traj.y_j, "s-", ms=3, label="J")
    ux, uy = zip(*scn["users"])
    ax.scatter(ux, uy, marker="^", c="k", label="users")
    for i, w in enumerate(scn["wardens"]):
        x, y = w["est_pos"]
        ax.add_patch(plt.Circle((x, y), w["radius"], fill=False, ec="r"))
        ax.scatter([x], [y], marker="x", c="r", label="wardens" if i == 0 else None)
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"{manifest['bench']} / {manifest['mode']}: {manifest['final_objective']:.4f} bits/s/Hz")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(run / "trajectory.png", dpi=150)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    objs = [trace["initial_objective"]] + [it["objective"] for it in trace["iterations"]]
    ax.plot(range(len(objs)), objs, "o-")
    ax.set_xlabel("iteration")
    ax.set_ylabel("min average rate (bits/s/Hz)")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(run / "convergence.png", dpi=150)


def plot_sweep(run: Path) -> None:
    rows = pd.read_csv(run / "sweep.csv")
    manifest = json.loads((run / "manifest.json").read_text())
    ok = rows[rows.status == "converged"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for bench, grp in ok.groupby("bench", sort=False):
        ax.plot(grp.axis_value, grp.min_avg_rate, "o-", label=bench)
    ax.set_xlabel(manifest.get("axis", "axis value"))
    ax.set_ylabel("min average rate (bits/s/Hz)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(run / "sweep.png", dpi=150)
    failed = rows[rows.status != "converged"]
    if len(failed):
        print(f"{len(failed)} cell(s) did not converge:", file=sys.stderr)
        print(failed.to_string(index=False), file=sys.stderr)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("kind", choices=["solve", "sweep"])
    ap.add_argument("run", type=Path, help="output directory of the run")
    args = ap.parse_args()
    (plot_solve if args.kind == "solve" else plot_sweep)(args.run)


if __name__ == "__main__":
    main()

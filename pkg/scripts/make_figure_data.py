#!/usr/bin/env python3
"""Generate the figure-ready datasets: Markov diagrams, frequency/cooperation
sweeps on all three topologies, and neighborhood-clustering snapshots.

Paper-scale settings (default) run 10^6 steps per replicate and take hours;
pass --desk for a minutes-scale shakedown with reduced steps and replicates.

Outputs land under --out (default: results/):
  fig1_markov_col{1,2,3}/   stationary.csv, fixation.csv, directions.csv, ...
  fig2_wellmixed_analytic/  sweep.csv (stationary-distribution curves)
  fig3_lattice/             sweep.csv
  fig4_scalefree/           sweep.csv
  fig4_baseline/            sweep.csv (C/D only: network-reciprocity baseline)
  fig5_<topology>_<tag>/    clusters.csv

Render images from these CSVs with the frontend package (see README).
"""

import argparse
import sys
from pathlib import Path

from guiltsim.cli import main as guiltsim_main

MARKOV_COLUMNS = {
    "col1": {"gamma": "0.5", "gamma_s": "0"},
    "col2": {"gamma": "4", "gamma_s": "0"},
    "col3": {"gamma": "4", "gamma_s": "1"},
}

CLUSTER_PANELS = {
    "b2_g4_gs0": {"b": "2", "gamma": "4", "gamma_s": "0"},
    "b4_g1_gs1": {"b": "4", "gamma": "1", "gamma_s": "1"},
    "b4_g7_gs0": {"b": "4", "gamma": "7", "gamma_s": "0"},
}

GAMMA_GRID = "0,0.5,1,2,3,4,5,6,7,8"
GAMMA_S_GRID = "0,0.1,0.5,1"
B_GRID = "2,4"


def call(*args):
    argv = [str(a) for a in args]
    print("guiltsim", " ".join(argv))
    code = guiltsim_main(argv)
    if code != 0:
        sys.exit(code)


def run_all(out: Path, desk: bool, seed: int, jobs: int):
    steps = "20000" if desk else "1000000"
    window = "4000" if desk else "100000"
    reps_lattice = "5" if desk else "30"
    reps_sf = "4" if desk else "20"
    snapshot = "200" if desk else "1000000"

    for tag, params in MARKOV_COLUMNS.items():
        call(
            "analytic", "--N", "100", "--b", "2", "--c", "1",
            "--gamma", params["gamma"], "--gamma-s", params["gamma_s"],
            "--out", out / f"fig1_markov_{tag}",
        )

    call(
        "sweep", "--mode", "analytic", "--N", "100",
        "--gamma-grid", GAMMA_GRID, "--gamma-s-grid", GAMMA_S_GRID, "--b-grid", B_GRID,
        "--out", out / "fig2_wellmixed_analytic",
    )

    call(
        "sweep", "--topology", "lattice", "--L", "30",
        "--steps", steps, "--window", window, "--replicates", reps_lattice,
        "--seed", seed, "--jobs", jobs,
        "--gamma-grid", GAMMA_GRID, "--gamma-s-grid", GAMMA_S_GRID, "--b-grid", B_GRID,
        "--out", out / "fig3_lattice",
    )

    call(
        "sweep", "--topology", "scalefree", "--N", "1000", "--m", "2",
        "--steps", steps, "--window", window, "--replicates", reps_sf,
        "--seed", seed, "--jobs", jobs,
        "--gamma-grid", GAMMA_GRID, "--gamma-s-grid", GAMMA_S_GRID, "--b-grid", B_GRID,
        "--out", out / "fig4_scalefree",
    )
    # cooperation achievable from network reciprocity alone
    call(
        "sweep", "--topology", "scalefree", "--N", "1000", "--m", "2",
        "--steps", steps, "--window", window, "--replicates", reps_sf,
        "--seed", seed, "--jobs", jobs, "--strategies", "C,D",
        "--gamma-grid", "0", "--gamma-s-grid", "0", "--b-grid", B_GRID,
        "--out", out / "fig4_baseline",
    )

    for tag, params in CLUSTER_PANELS.items():
        for topology, size_flag, size in (
            ("lattice", "--L", "30"),
            ("scalefree", "--N", "1000"),
        ):
            call(
                "cluster", "--topology", topology, size_flag, size, "--m", "2",
                "--b", params["b"], "--gamma", params["gamma"],
                "--gamma-s", params["gamma_s"],
                "--steps", steps, "--window", window, "--seed", seed,
                "--snapshot-steps", snapshot,
                "--out", out / f"fig5_{topology}_{tag}",
            )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--desk", action="store_true", help="fast reduced-scale run")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    run_all(args.out, args.desk, args.seed, args.jobs)

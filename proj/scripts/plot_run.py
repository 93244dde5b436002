#!/usr/bin/env python3
"""Plot the CSV outputs of a vaxopt run directory.

Usage:
    python3 scripts/plot_run.py <run-dir> [--out <dir>]

Reads whichever of states.csv / controls.csv / adjoints.csv / infected.csv
exist in the run directory and writes one PNG per file next to them (or into
--out). Plotting is a convenience only; nothing in the pipeline depends on it.
"""
import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        columns = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                columns[name].append(float(value) if value else float("nan"))
    return columns


def plot_columns(columns, title, ylabel, out_path, logy=False):
    t = columns["t"]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, series in columns.items():
        if name == "t":
            continue
        ax.plot(t, series, label=name, linewidth=1.2)
    ax.set_xlabel("time (days)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    print(f"wrote {out_path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dir", type=pathlib.Path)
    parser.add_argument("--out", type=pathlib.Path, default=None)
    args = parser.parse_args()

    out_dir = args.out or args.run_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    plots = {
        "states.csv": ("compartments", "individuals", True),
        "controls.csv": ("vaccination controls", "fraction per day", False),
        "adjoints.csv": ("adjoint variables", "costate value", False),
        "infected.csv": ("infected under each policy", "individuals", False),
    }
    found = False
    for name, (title, ylabel, logy) in plots.items():
        path = args.run_dir / name
        if not path.exists():
            continue
        found = True
        plot_columns(read_csv(path), title, ylabel, out_dir / (path.stem + ".png"), logy)
    if not found:
        sys.exit(f"no plottable CSV files in {args.run_dir}")


if __name__ == "__main__":
    main()

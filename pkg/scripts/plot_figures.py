"""Plot rmdspin CSV outputs.

Usage::

    python3 scripts/plot_figures.py OUT_DIR [--save FIG.png]

Picks a figure based on which files ``OUT_DIR`` contains: ``points.csv``
(tau_th vs 1/T, log-log, with the fitted power laws from ``fits.json``),
``trajectory.csv``, ``magnetization.csv``, ``phase_alpha.csv`` or
``calibration.csv``.
"""

from __future__ import annotations

import argparse
import csv
import json
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np


def read(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def num(x: str) -> float:
    return float(x) if x else float("nan")


def plot_points(out: Path, ax) -> None:
    fits = json.loads((out / "fits.json").read_text())["fits"] if (out / "fits.json").exists() else {}
    groups = defaultdict(list)
    for row in read(out / "points.csv"):
        groups[row["drive"]].append((num(row["inv_T"]), num(row["tau_mean"]), num(row["tau_stderr"])))
    for drive, rows in sorted(groups.items()):
        f, tau, err = map(np.array, zip(*sorted(rows)))
        (line,) = ax.plot(f, tau, "o", label=drive)
        ax.errorbar(f, tau, yerr=err, fmt="none", color=line.get_color())
        pl = fits.get(drive, {}).get("power_law")
        if pl:
            grid = np.linspace(f.min(), f.max(), 50)
            ax.plot(grid, pl["params"]["prefactor"] * grid ** pl["params"]["alpha"], "--", color=line.get_color(),
                    label=f"alpha={pl['params']['alpha']:.2f}")
    ax.set(xscale="log", yscale="log", xlabel="1/T", ylabel="tau_th (periods)")


def plot_trajectory(out: Path, ax) -> None:
    rows = read(out / "trajectory.csv")
    step = [num(r["step"]) for r in rows]
    for col in ("energy_ave_density", "staggered_m", "decorrelator"):
        ax.plot(step, [num(r[col]) for r in rows], label=col)
    ax.set(xscale="log", xlabel="periods")


def plot_magnetization(out: Path, ax) -> None:
    groups = defaultdict(list)
    for r in read(out / "magnetization.csv"):
        groups[(r["drive"], r["g_tc"], r["realization"])].append((num(r["step"]), num(r["magnetization_z"])))
    for (drive, gtc, real), rows in sorted(groups.items()):
        if real != "0":
            continue
        s, m = zip(*rows)
        ax.plot(s, m, ".", ms=2, label=f"{drive} g_tc={gtc}")
    ax.set(xlabel="periods", ylabel="<S^z> at 4m periods")


def plot_phase(out: Path, ax) -> None:
    groups = defaultdict(list)
    for r in read(out / "phase_alpha.csv"):
        groups[r["drive"]].append((num(r["epsilon"]), num(r["alpha"]), num(r["alpha_stderr"])))
    for drive, rows in sorted(groups.items()):
        e, a, s = zip(*sorted(rows))
        ax.errorbar(e, a, yerr=s, fmt="o-", label=drive)
    ax.set(xlabel="initial energy density", ylabel="alpha")


def plot_calibration(out: Path, ax) -> None:
    groups = defaultdict(list)
    for r in read(out / "calibration.csv"):
        groups[r["kind"]].append((num(r["W"]), num(r["energy_mean"]), num(r["energy_std"])))
    for kind, rows in sorted(groups.items()):
        w, e, s = zip(*rows)
        ax.errorbar(w, e, yerr=s, fmt="o-", ms=3, label=kind)
    ax.set(xlabel="W", ylabel="energy density")


PLOTTERS = [
    ("points.csv", plot_points),
    ("trajectory.csv", plot_trajectory),
    ("magnetization.csv", plot_magnetization),
    ("phase_alpha.csv", plot_phase),
    ("calibration.csv", plot_calibration),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", type=Path)
    ap.add_argument("--save", type=Path)
    args = ap.parse_args()
    name, fn = next(((n, f) for n, f in PLOTTERS if (args.out / n).exists()), (None, None))
    if fn is None:
        raise SystemExit(f"no known CSV in {args.out}")
    fig, ax = plt.subplots(figsize=(6, 4))
    fn(args.out, ax)
    ax.set_title(f"{args.out.name}: {name}")
    ax.legend(fontsize=7)
    fig.tight_layout()
    if args.save:
        fig.savefig(args.save, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()

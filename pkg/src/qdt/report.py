"""Render a finished run into figures and delimited data.

Reads the artifact files of one run directory and writes, next to them
(or into --out):

* history.csv          every objective evaluation plus the running best
* energy_history.png   objective value against evaluation index
* solution.png         tour drawing (coordinates when available) or the
                       two-colored cut graph

Runs without an optimizer history (classical solvers) get only the
solution figure.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _load_json(path: Path) -> dict | None:
    if not path.exists():
        return None
    return json.loads(path.read_text())


def _instance_record(run_dir: Path) -> dict | None:
    record = _load_json(run_dir / "problem_instance.json")
    if record is not None:
        return record
    data = _load_json(run_dir / "problem_data.json")
    if data and isinstance(data.get("problem_instance"), dict):
        record = data["problem_instance"]
        if "__opaque__" not in record:
            return record
    return None


def _write_history_csv(history: list[dict], path: Path) -> None:
    best = math.inf
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "energy", "best_so_far"])
        for entry in history:
            best = min(best, entry["energy"])
            writer.writerow([entry["iteration"], entry["energy"], best])


def _plot_history(history: list[dict], path: Path) -> None:
    iterations = [e["iteration"] for e in history]
    energies = [e["energy"] for e in history]
    best = []
    acc = math.inf
    for e in energies:
        acc = min(acc, e)
        best.append(acc)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(iterations, energies, lw=0.8, alpha=0.6, label="evaluation")
    ax.plot(iterations, best, lw=1.8, label="best so far")
    ax.set_xlabel("objective evaluation")
    ax.set_ylabel("model energy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _circle_layout(n: int) -> list[tuple[float, float]]:
    return [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
            for k in range(n)]


def _plot_tour(record: dict, tour: list[int], path: Path) -> None:
    coords = record.get("coordinates")
    if coords is None:
        coords = _circle_layout(len(record["distances"]))
    xs = [coords[c][0] for c in tour] + [coords[tour[0]][0]]
    ys = [coords[c][1] for c in tour] + [coords[tour[0]][1]]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(xs, ys, "-o", color="tab:blue")
    labels = record.get("labels") or [str(c) for c in range(len(coords))]
    for c, (x, y) in enumerate(coords):
        ax.annotate(labels[c], (x, y), textcoords="offset points",
                    xytext=(5, 5))
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_cut(record: dict, partition: list[int], path: Path) -> None:
    n = record["num_nodes"]
    coords = _circle_layout(n)
    fig, ax = plt.subplots(figsize=(5, 5))
    for u, v, *_ in record["edges"]:
        crossing = partition[u] != partition[v]
        ax.plot([coords[u][0], coords[v][0]], [coords[u][1], coords[v][1]],
                ls="--" if crossing else "-",
                color="tab:red" if crossing else "0.6",
                lw=1.8 if crossing else 1.0, zorder=1)
    for side, color in ((0, "tab:blue"), (1, "tab:orange")):
        xs = [coords[i][0] for i in range(n) if partition[i] == side]
        ys = [coords[i][1] for i in range(n) if partition[i] == side]
        ax.scatter(xs, ys, s=160, color=color, zorder=2,
                   label=f"side {side}")
    for i, (x, y) in enumerate(coords):
        ax.annotate(str(i), (x, y), ha="center", va="center", zorder=3)
    ax.legend(loc="upper right")
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def generate_report(run_dir: str | Path, out_dir: str | Path | None = None) -> list[str]:
    """Produce report files for one run directory; returns what was written."""
    run_dir = Path(run_dir)
    out = Path(out_dir) if out_dir is not None else run_dir
    out.mkdir(parents=True, exist_ok=True)
    result = _load_json(run_dir / "result.json")
    if result is None:
        raise FileNotFoundError(f"no result.json under {run_dir}")

    written: list[str] = []
    history = result.get("history") or []
    if history:
        csv_path = out / "history.csv"
        _write_history_csv(history, csv_path)
        written.append(str(csv_path))
        png_path = out / "energy_history.png"
        _plot_history(history, png_path)
        written.append(str(png_path))

    record = _instance_record(run_dir)
    solution = result.get("solution")
    if record and solution is not None:
        solution_path = out / "solution.png"
        if result.get("problem_class") == "tsp":
            _plot_tour(record, solution, solution_path)
            written.append(str(solution_path))
        elif result.get("problem_class") == "maxcut":
            _plot_cut(record, solution, solution_path)
            written.append(str(solution_path))
    return written

"""CSV tables and plot data from score tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .scoring import GUESS_RATE, ScoreTable

COLUMNS = ("model", "k", "mean", "std", "guess_rate", "n", "other_rate", "failures")


def _fmt(v):
    return "" if v is None else (f"{v:.4f}" if isinstance(v, float) else v)


def write_table(tables: list[ScoreTable], path) -> int:
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for t in tables:
            for r in t.rows:
                w.writerow([t.model, r.k, _fmt(r.mean), _fmt(r.std), _fmt(t.guess_rate), r.n,
                            _fmt(r.other_rate), r.failures])
                rows += 1
    return rows


def plot_data(tables: list[ScoreTable]) -> dict:
    return {
        "x": "k",
        "y": "accuracy",
        "reference": {"label": "guess rate", "y": GUESS_RATE},
        "series": [{"model": t.model, "k": [r.k for r in t.rows], "mean": [r.mean for r in t.rows],
                    "std": [r.std for r in t.rows]} for t in tables],
    }


def report(tables: dict[str, list[ScoreTable]], out_dir) -> list[Path]:
    """One CSV and one plot-data JSON per experiment name."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, ts in tables.items():
        csv_path = out / f"{name}.csv"
        write_table(ts, csv_path)
        plot_path = out / f"{name}.plot.json"
        plot_path.write_text(json.dumps(plot_data(ts), indent=2) + "\n", encoding="utf-8")
        written += [csv_path, plot_path]
    return written


def read_table(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))

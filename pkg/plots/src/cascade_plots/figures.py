"""Render the five standard figures from sweep CSV tables.

Two correct-cascade figures (with / without the subsidy) plot the fraction
of correct cascades against signal strength, one line per population size.
Three progression figures (populations 10, 100, 1000) plot the average
subsidy per round against the round index, one line per signal strength.

This layer only groups and draws what the CSVs already contain; it never
re-derives statistics.  Rendering is deterministic: a pinned style, a fixed
SVG hash salt, and stripped timestamps make repeated renders byte-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib import rc_context

OUTCOME_COLUMNS = (
    "population", "p", "subsidy", "frac_correct", "frac_incorrect",
    "frac_none", "mean_onset", "mean_subsidy_total",
)
PROGRESSION_COLUMNS = ("population", "p", "t", "mean_subsidy")

# Pinned style: deterministic ids, fonts, and colors across machines.
STYLE = {
    "svg.hashsalt": "cascade-plots",
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.8,
}

_NO_TIMESTAMPS = {"Date": None}


class FigureId(Enum):
    CORRECT_WITH_SUBSIDY = "correct_with_subsidy"
    CORRECT_WITHOUT_SUBSIDY = "correct_without_subsidy"
    PROGRESSION_10 = "progression_10"
    PROGRESSION_100 = "progression_100"
    PROGRESSION_1000 = "progression_1000"


PROGRESSION_POPULATION = {
    FigureId.PROGRESSION_10: 10,
    FigureId.PROGRESSION_100: 100,
    FigureId.PROGRESSION_1000: 1000,
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw, from which table, to which file (suffix picks format)."""

    figure_id: FigureId
    input_csv: Path
    output_image: Path


@dataclass
class RenderResult:
    output_image: Path
    series_labels: list[str]


class CsvSchemaError(ValueError):
    """The input table cannot support the requested figure."""


def read_rows(path: Path, required: tuple[str, ...]) -> list[dict]:
    """Load a CSV and fail loudly if any required column is missing."""
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            missing = [col for col in required if col not in header]
            if missing:
                raise CsvSchemaError(
                    f"{path}: missing required column(s) {missing}; found {header}"
                )
            return list(reader)
    except OSError as exc:
        raise CsvSchemaError(f"cannot read {path}: {exc}") from exc


def _correct_cascade_series(rows: list[dict], want_subsidy: str) -> dict[int, list[tuple]]:
    series: dict[int, list[tuple]] = {}
    for row in rows:
        if row["subsidy"] != want_subsidy:
            continue
        series.setdefault(int(row["population"]), []).append(
            (float(row["p"]), float(row["frac_correct"]))
        )
    for points in series.values():
        points.sort()
    return series


def _progression_series(rows: list[dict], population: int) -> dict[float, list[tuple]]:
    series: dict[float, list[tuple]] = {}
    for row in rows:
        if int(row["population"]) != population:
            continue
        series.setdefault(float(row["p"]), []).append(
            (int(row["t"]), float(row["mean_subsidy"]))
        )
    for points in series.values():
        points.sort()
    return dict(sorted(series.items()))


def render_figure(spec: FigureSpec) -> RenderResult:
    """Draw one figure; returns the written path and its series labels."""
    if spec.figure_id in PROGRESSION_POPULATION:
        rows = read_rows(spec.input_csv, PROGRESSION_COLUMNS)
        population = PROGRESSION_POPULATION[spec.figure_id]
        series = _progression_series(rows, population)
        if not series:
            raise CsvSchemaError(
                f"{spec.input_csv}: no progression rows for population {population}"
            )
        labels = []
        with rc_context(STYLE):
            fig, ax = plt.subplots()
            for p_value, points in series.items():
                label = f"p = {p_value:g}"
                ax.plot([t for t, _ in points], [v for _, v in points], label=label)
                labels.append(label)
            ax.set_xlabel("round")
            ax.set_ylabel("average subsidy per round")
            ax.set_title(f"Average subsidy progression, {population} agents")
            ax.legend(fontsize=7, ncol=2)
            fig.savefig(spec.output_image, metadata=_NO_TIMESTAMPS)
            plt.close(fig)
        return RenderResult(spec.output_image, labels)

    want = "on" if spec.figure_id is FigureId.CORRECT_WITH_SUBSIDY else "off"
    rows = read_rows(spec.input_csv, OUTCOME_COLUMNS)
    series = _correct_cascade_series(rows, want)
    if not series:
        raise CsvSchemaError(
            f"{spec.input_csv}: no outcome rows with subsidy={want}"
        )
    labels = []
    with rc_context(STYLE):
        fig, ax = plt.subplots()
        for population, points in sorted(series.items()):
            label = f"{population} agents"
            ax.plot([p for p, _ in points], [v for _, v in points], marker="o", label=label)
            labels.append(label)
        ax.set_xlabel("signal strength p")
        ax.set_ylabel("proportion of correct cascades")
        ax.set_ylim(-0.02, 1.02)
        state = "with" if want == "on" else "without"
        ax.set_title(f"Correct cascades {state} subsidy")
        ax.legend()
        fig.savefig(spec.output_image, metadata=_NO_TIMESTAMPS)
        plt.close(fig)
    return RenderResult(spec.output_image, labels)

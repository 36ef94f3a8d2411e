"""render_figures <csv_dir> <out_dir> [--format svg|png|both]

Finds sweep CSVs under csv_dir (recursively, so with-subsidy and no-subsidy
sweeps can live in sibling directories), merges the outcome tables, picks the
progression table of the subsidized sweep, and writes the five figures.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from pathlib import Path

from .figures import (
    OUTCOME_COLUMNS,
    PROGRESSION_COLUMNS,
    CsvSchemaError,
    FigureId,
    FigureSpec,
    read_rows,
    render_figure,
)

OUTCOMES_NAME = "cascade_outcomes.csv"
PROGRESSION_NAME = "subsidy_progression.csv"


def _merge_outcomes(csv_dir: Path, scratch: Path) -> Path:
    """Concatenate every outcomes table found; rows keep their subsidy value."""
    found = sorted(csv_dir.rglob(OUTCOMES_NAME))
    if not found:
        raise CsvSchemaError(f"no {OUTCOMES_NAME} under {csv_dir}")
    rows = []
    for path in found:
        rows.extend(read_rows(path, OUTCOME_COLUMNS))
    if not rows:
        raise CsvSchemaError(f"outcome tables under {csv_dir} contain no data rows")
    merged = scratch / OUTCOMES_NAME
    with open(merged, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(OUTCOME_COLUMNS) + "\n")
        for row in rows:
            f.write(",".join(row[col] for col in OUTCOME_COLUMNS) + "\n")
    return merged


def _pick_progression(csv_dir: Path) -> Path:
    """Choose the progression table belonging to a subsidized sweep.

    A progression file is skipped when a sibling outcomes file shows its
    sweep ran with the subsidy off (its progression would be all zeros).
    Conflicting duplicates are an error rather than a guess.
    """
    candidates = []
    for path in sorted(csv_dir.rglob(PROGRESSION_NAME)):
        sibling = path.parent / OUTCOMES_NAME
        if sibling.exists():
            rows = read_rows(sibling, OUTCOME_COLUMNS)
            if rows and all(row["subsidy"] == "off" for row in rows):
                continue
        candidates.append(path)
    if not candidates:
        raise CsvSchemaError(
            f"no {PROGRESSION_NAME} from a subsidized sweep under {csv_dir}"
        )
    if len(candidates) > 1:
        raise CsvSchemaError(
            f"multiple subsidized progression tables under {csv_dir}: "
            f"{[str(c) for c in candidates]}; keep one"
        )
    rows = read_rows(candidates[0], PROGRESSION_COLUMNS)
    if not rows:
        raise CsvSchemaError(f"{candidates[0]} contains no data rows")
    return candidates[0]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render the five cascade figures from sweep CSV tables.",
    )
    parser.add_argument("csv_dir", type=Path, help="directory containing sweep CSVs")
    parser.add_argument("out_dir", type=Path, help="where to write the images")
    parser.add_argument(
        "--format", choices=("svg", "png", "both"), default="both", dest="image_format"
    )
    args = parser.parse_args(argv)

    try:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create {args.out_dir}: {exc}", file=sys.stderr)
        return 3

    formats = ("svg", "png") if args.image_format == "both" else (args.image_format,)
    try:
        with tempfile.TemporaryDirectory(prefix="cascade_plots_") as scratch:
            outcomes = _merge_outcomes(args.csv_dir, Path(scratch))
            progression = _pick_progression(args.csv_dir)
            for figure_id in FigureId:
                source = (
                    outcomes
                    if figure_id
                    in (FigureId.CORRECT_WITH_SUBSIDY, FigureId.CORRECT_WITHOUT_SUBSIDY)
                    else progression
                )
                for fmt in formats:
                    spec = FigureSpec(
                        figure_id=figure_id,
                        input_csv=source,
                        output_image=args.out_dir / f"{figure_id.value}.{fmt}",
                    )
                    result = render_figure(spec)
                    print(str(result.output_image))
    except CsvSchemaError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

"""Reproduce the experimental sweep and export the figure datasets.

Runs the full grid (populations 10/100/1000, p from 0.51 to 0.99, 100
replications each) twice, with and without the subsidy, and writes the CSV
tables the plotting package consumes.  Takes a couple of seconds per sweep.

Equivalent CLI:
    cascade-lab sweep --paper-defaults --subsidy on  --out-dir sweep_data/on
    cascade-lab sweep --paper-defaults --subsidy off --out-dir sweep_data/off
"""

from pathlib import Path

from cascade_lab import export_csv, paper_sweep_config, run_sweep

OUT = Path("sweep_data")


def main():
    for label, enabled in (("on", True), ("off", False)):
        stats = run_sweep(paper_sweep_config(subsidy_enabled=enabled, base_seed=0), threads=4)
        paths = export_csv(stats, OUT / label)
        print(f"subsidy {label}:")
        for path in paths:
            print(f"  {path}")
        frac_10 = next(s for s in stats if s.population == 1000 and abs(s.p - 0.63) < 1e-9)
        print(f"  e.g. N=1000, p=0.63: frac_correct = {frac_10.frac_correct:.2f}\n")
    print("Render the five figures with:  render_figures sweep_data figures --format both")


if __name__ == "__main__":
    main()

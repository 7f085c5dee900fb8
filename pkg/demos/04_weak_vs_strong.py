"""Quantitative weak-vs-strong comparison (the precision/accuracy table).

Runs the two shipped presets end to end - simulate, fit, contrast-correct,
extract, reconstruct - and aggregates the root-mean-square statistical error
(precision, sigma_bar) and the RMS deviation from theory (accuracy,
delta_bar) for nu, theta and phi. The strong interaction wins every cell,
and needs 290 s instead of 540 s per point on top of that.

Run:  python demos/04_weak_vs_strong.py
"""

import math
from dataclasses import replace

import numpy as np

from pathtomo import analyze_campaign, build_comparison, run_campaign
from pathtomo.cli import preset_config
from pathtomo.report import PARAMETERS


def main() -> None:
    weak_config = preset_config("weak", seed=11)
    strong_config = preset_config("strong", seed=22)
    weak = analyze_campaign(run_campaign(weak_config))
    strong = analyze_campaign(run_campaign(strong_config))
    report = build_comparison(
        weak.estimates,
        strong.estimates,
        theory=(weak_config.theta, weak_config.phi_grid),
        weak_time=weak_config.time_per_point,
        strong_time=strong_config.time_per_point,
    )

    print("one campaign pair at the shipped presets "
          f"({len(weak_config.phi_grid)} phases, counting {weak_config.time_per_point:.0f} s "
          f"vs {strong_config.time_per_point:.0f} s per point):\n")
    print(f"{'':10s}{'precision sigma_bar':>32s}{'accuracy delta_bar':>32s}")
    print(f"{'param':10s}{'weak':>12s}{'strong':>10s}{'ratio':>10s}"
          f"{'weak':>12s}{'strong':>10s}{'ratio':>10s}")
    for parameter in PARAMETERS:
        row = f"{parameter:10s}"
        for metric in ("precision", "accuracy"):
            w = report.cell("weak", parameter, metric)
            s = report.cell("strong", parameter, metric)
            row += f"{w:12.4f}{s:10.4f}{w / s:10.2f}"
        print(row)
    print("\nflags (cells where strong fails to win):", report.flags or "none")

    # the trend is not a single-seed accident: median ratios over 20 pairs
    ratios = {p: [] for p in PARAMETERS}
    for pair in range(20):
        w = analyze_campaign(run_campaign(replace(weak_config, rng_seed=400 + pair)))
        s = analyze_campaign(run_campaign(replace(strong_config, rng_seed=500 + pair)))
        rep = build_comparison(w.estimates, s.estimates,
                               (weak_config.theta, weak_config.phi_grid), 540.0, 290.0)
        for p in PARAMETERS:
            ratios[p].append(rep.ratio(p, "precision"))
    print("\nmedian precision ratios over 20 independent campaign pairs:")
    for p in PARAMETERS:
        print(f"  sigma_bar({p}) weak/strong = {np.median(ratios[p]):.2f}")


if __name__ == "__main__":
    main()

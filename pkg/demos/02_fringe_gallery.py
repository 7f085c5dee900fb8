"""Interferogram gallery: weak (15 deg) vs strong (90 deg) coupling.

Reproduces the fringe phenomenology of the experiment: the z+ and z- fringes
are phase shifted against each other by 2*alpha (hard to resolve at 15 deg,
a full half period at 90 deg); the y pair shares one fringe whose visibility
shrinks like cos(alpha); the x+ fringe dominates at weak coupling while at
90 deg the x pair becomes two equal fringes shifted by pi.

Writes fringe_gallery.png next to this script.

Run:  python demos/02_fringe_gallery.py
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pathtomo import fit_sinusoid, run_direction_set
from pathtomo.sim import ExperimentConfig

PHI = math.radians(30.0)


def config_for(alpha_deg: float) -> ExperimentConfig:
    return ExperimentConfig(
        alpha=math.radians(alpha_deg),
        time_per_point=40.0,
        peak_rate=60.0,
        background_rate=3.0,
        contrast=0.75,
        phi_grid=(PHI,),
        chi_grid=tuple(np.linspace(0.0, 2.0 * math.pi, 24, endpoint=False)),
        rng_seed=42,
        regime_label=f"alpha={alpha_deg:.0f}deg",
    )


def main() -> None:
    fig, axes = plt.subplots(3, 2, figsize=(9, 8), sharex=True)
    chi_fine = np.linspace(0.0, 2.0 * math.pi, 400)

    for col, alpha_deg in enumerate((15.0, 90.0)):
        config = config_for(alpha_deg)
        scans = run_direction_set(config, PHI)
        for row, axis in enumerate("xyz"):
            ax = axes[row, col]
            for sign, marker, style in (("+", "o", "-"), ("-", "s", "--")):
                scan = scans[axis + sign]
                rate = np.array(scan.counts) / scan.time_per_point - scan.background_rate
                err = np.sqrt(np.maximum(scan.counts, 1.0)) / scan.time_per_point
                fit = fit_sinusoid(scan)
                model = fit.offset + fit.amplitude * np.cos(chi_fine + fit.phase)
                ax.errorbar(scan.chi, rate, yerr=err, fmt=marker, ms=3.5,
                            label=f"I{axis}{sign}", alpha=0.8)
                ax.plot(chi_fine, model, style, lw=1.0)
            ax.set_ylabel("rate (1/s)")
            ax.legend(fontsize=8, loc="upper right")
            if row == 0:
                ax.set_title(f"alpha = {alpha_deg:.0f} deg")
        axes[2, col].set_xlabel("phase shifter chi (rad)")

        z_shift = fit_sinusoid(scans["z+"]).phase - fit_sinusoid(scans["z-"]).phase
        print(f"alpha = {alpha_deg:3.0f} deg: fitted z+/z- phase shift = "
              f"{math.degrees(z_shift) % 360:.2f} deg (expected {2 * alpha_deg:.0f} deg)")
        y_fit = fit_sinusoid(scans["y+"])
        print(f"{'':18s}y+ visibility = {y_fit.amplitude / y_fit.offset:.3f} "
              f"(expected C cos(alpha) = {0.75 * math.cos(math.radians(alpha_deg)):.3f})")

    fig.suptitle("Postselected meter interferograms, weak vs strong coupling")
    fig.tight_layout()
    out = Path(__file__).with_name("fringe_gallery.png")
    fig.savefig(out, dpi=150)
    print(f"\nwrote {out}")


if __name__ == "__main__":
    main()

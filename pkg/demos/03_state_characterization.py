"""Direct state characterization across a phase sweep.

For each preselected phase phi the six fitted intensities invert into the
complex weak value, the projector weak values, and finally the state itself:
normalization nu, weight theta and phase phi with one-standard-deviation
error bars. Solid curves are the analytic predictions. The strong-coupling
column visibly hugs the theory tighter than the weak one.

Writes state_characterization.png next to this script.

Run:  python demos/03_state_characterization.py
"""

import math
from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pathtomo import analyze_campaign, run_campaign
from pathtomo.cli import preset_config
from pathtomo.report import PARAMETERS, theory_values

# shorten the counting time so the error bars are visible at demo scale
TIME_SCALE = 0.2


def main() -> None:
    fig, axes = plt.subplots(3, 2, figsize=(9, 8), sharex=True)
    phi_fine = np.linspace(-math.pi / 2, math.pi / 2, 300)

    for col, preset in enumerate(("weak", "strong")):
        base = preset_config(preset)
        config = replace(
            base, time_per_point=base.time_per_point * TIME_SCALE, rng_seed=2024 + col
        )
        analysis = analyze_campaign(run_campaign(config))
        print(f"{preset}: alpha = {math.degrees(config.alpha):.0f} deg, "
              f"{config.time_per_point:.0f} s/point, fitted contrast "
              f"{analysis.contrast:.3f} +- {analysis.contrast_sigma:.3f}")

        phis = [e.phi for e in analysis.estimates]
        measured = {
            "nu": ([e.state.nu for e in analysis.estimates],
                   [e.state.sigma_nu for e in analysis.estimates]),
            "theta": ([e.state.theta_m for e in analysis.estimates],
                      [e.state.sigma_theta for e in analysis.estimates]),
            "phi": ([e.state.phi_m for e in analysis.estimates],
                    [e.state.sigma_phi for e in analysis.estimates]),
        }
        labels = {"nu": "nu", "theta": "theta (rad)", "phi": "phi (rad)"}
        for row, parameter in enumerate(PARAMETERS):
            ax = axes[row, col]
            values, sigmas = measured[parameter]
            ax.errorbar(phis, values, yerr=sigmas, fmt="o", ms=4, capsize=2)
            ax.plot(phi_fine, theory_values(parameter, config.theta, phi_fine), "-", lw=1.2)
            ax.set_ylabel(labels[parameter])
            if row == 0:
                ax.set_title(f"{preset} (alpha = {math.degrees(config.alpha):.0f} deg)")
        axes[2, col].set_xlabel("preselected phase phi (rad)")

    fig.suptitle("Reconstructed path state vs theory (error bars: one standard deviation)")
    fig.tight_layout()
    out = Path(__file__).with_name("state_characterization.png")
    fig.savefig(out, dpi=150)
    print(f"\nwrote {out}")


if __name__ == "__main__":
    main()

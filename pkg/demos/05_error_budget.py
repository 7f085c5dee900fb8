"""Error budget: first-order propagation against brute-force Monte Carlo.

Every reported error bar comes from the delta method: analytic Jacobians of
the extraction relations and the reconstruction map, fed with the fit
covariances. This demo checks those sigmas against the spread of 100k
Poisson replicas and shows WHERE the weak regime loses: the cot(alpha/2)
lever arm multiplies the z-pair counting noise by ~7.6 at 15 degrees.

Run:  python demos/05_error_budget.py
"""

import math

import numpy as np

from pathtomo import ideal_intensities, propagate_errors
from pathtomo.protocol import IntensitySet

PHI = math.pi / 2
TOTAL_COUNTS = 1000.0


def monte_carlo_sigmas(alpha: float, replicas: int = 100_000) -> dict:
    rng = np.random.default_rng(5)
    truth = ideal_intensities(math.pi / 2, PHI, alpha).as_array()
    counts = rng.poisson(truth * TOTAL_COUNTS, size=(replicas, 6))
    i = counts / TOTAL_COUNTS
    k = 0.5 / math.tan(alpha / 2.0)
    re = k * (i[:, 2] - i[:, 3]) / i[:, 0]
    im = k * (i[:, 4] - i[:, 5]) / i[:, 0]
    modulus = 2.0 * k * np.sqrt(np.maximum(i[:, 1], 0.0) / i[:, 0])
    return {"re": re.std(), "im": im.std(), "modulus": modulus.std()}


def main() -> None:
    print(f"working point: theta = 90 deg, phi = 90 deg, {TOTAL_COUNTS:.0f} counts per scan\n")
    sigma_im = {}
    for alpha_deg in (15.0, 90.0):
        alpha = math.radians(alpha_deg)
        truth = ideal_intensities(math.pi / 2, PHI, alpha)
        sigmas = IntensitySet(*(np.sqrt(truth.as_array() * TOTAL_COUNTS) / TOTAL_COUNTS))
        wv, state = propagate_errors(truth, sigmas, alpha)
        mc = monte_carlo_sigmas(alpha)
        sigma_im[alpha_deg] = wv.sigma_im

        print(f"alpha = {alpha_deg:.0f} deg  (cot(alpha/2)/2 = {0.5 / math.tan(alpha / 2):.3f})")
        for channel, delta_sigma in (("re", wv.sigma_re), ("im", wv.sigma_im),
                                     ("modulus", wv.sigma_modulus)):
            rel = abs(delta_sigma - mc[channel]) / mc[channel]
            print(f"  sigma_{channel:8s} delta method {delta_sigma:.5f}   "
                  f"Monte Carlo {mc[channel]:.5f}   agreement {rel:.1%}")
        print(f"  propagated state errors: sigma_nu = {state.sigma_nu:.5f}, "
              f"sigma_theta = {state.sigma_theta:.5f}, sigma_phi = {state.sigma_phi:.5f}\n")

    ratio = sigma_im[15.0] / sigma_im[90.0]
    print(f"weak/strong sigma_im ratio at equal counts: {ratio:.2f}")
    print("(the lever arm cot(7.5deg)/cot(45deg) = 7.60 is tempered by the weak "
          "regime's larger Ix+ normalizer)")


if __name__ == "__main__":
    main()

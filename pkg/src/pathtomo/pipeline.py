"""End-to-end campaign analysis: fit, contrast-correct, extract, reconstruct.

For each preselected phase the six interferograms are fitted, evaluated at
chi = 0, corrected for the calibrated interferometer contrast, and inverted
into a weak value and a path-state estimate with propagated uncertainties.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .extract import PointEstimate, contrast_correct, estimate_from_dict, estimate_to_dict, propagate_errors
from .fit import FringeFit, fit_sinusoid, fitted_visibility
from .protocol import IntensitySet
from .qcore import DIRECTIONS
from .sim import CampaignResult


@dataclass(frozen=True)
class AnalyzedCampaign:
    """A campaign together with its fits and per-phi extraction records."""

    campaign: CampaignResult
    calibration_fit: FringeFit
    contrast: float
    contrast_sigma: float
    fits: tuple  # one dict {direction: FringeFit} per phi
    estimates: tuple  # one PointEstimate per phi


def corrected_intensities(
    fits: dict, c_hat: float, c_sigma: float
) -> tuple[IntensitySet, IntensitySet]:
    """Contrast-corrected chi = 0 intensities and their standard deviations.

    The corrected value is offset + P/c_hat (the fitted fringe with its
    oscillation rescaled, evaluated at chi = 0); its variance combines the fit
    covariance with the contrast-estimate uncertainty.
    """
    raw = IntensitySet.from_dict({d: fits[d].offset + fits[d].p for d in DIRECTIONS})
    offsets = IntensitySet.from_dict({d: fits[d].offset for d in DIRECTIONS})
    corrected = contrast_correct(raw, c_hat, offsets=offsets)

    sigmas = {}
    for d in DIRECTIONS:
        f = fits[d]
        cov = f.covariance
        variance = (
            cov[0, 0]
            + cov[1, 1] / c_hat**2
            + 2.0 * cov[0, 1] / c_hat
            + (f.p / c_hat**2) ** 2 * c_sigma**2
        )
        sigmas[d] = math.sqrt(max(variance, 0.0))
    return corrected, IntensitySet.from_dict(sigmas)


def analyze_campaign(campaign: CampaignResult) -> AnalyzedCampaign:
    """Run the full inversion chain on every phi point of a campaign."""
    config = campaign.config
    calibration_fit = fit_sinusoid(campaign.calibration)
    c_hat, c_sigma = fitted_visibility(calibration_fit)

    fits = []
    estimates = []
    for phi, per_direction in zip(config.phi_grid, campaign.scans):
        phi_fits = {d: fit_sinusoid(per_direction[d]) for d in DIRECTIONS}
        intensities, sigmas = corrected_intensities(phi_fits, c_hat, c_sigma)
        weak_value, state = propagate_errors(intensities, sigmas, config.alpha)
        fits.append(phi_fits)
        estimates.append(
            PointEstimate(
                phi=phi,
                alpha=config.alpha,
                weak_value=weak_value,
                state=state,
                contrast=c_hat,
                contrast_sigma=c_sigma,
                regime_label=config.regime_label,
            )
        )
    return AnalyzedCampaign(
        campaign=campaign,
        calibration_fit=calibration_fit,
        contrast=c_hat,
        contrast_sigma=c_sigma,
        fits=tuple(fits),
        estimates=tuple(estimates),
    )


def write_estimates(analysis: AnalyzedCampaign, out_dir) -> Path:
    """Write the per-phi extraction records as estimates.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = analysis.campaign.config
    payload = {
        "regime_label": config.regime_label,
        "alpha_rad": config.alpha,
        "theta_rad": config.theta,
        "time_per_point_s": config.time_per_point,
        "rng_seed": config.rng_seed,
        "phi_grid": list(config.phi_grid),
        "contrast": {"c_hat": analysis.contrast, "sigma": analysis.contrast_sigma},
        "points": [estimate_to_dict(e) for e in analysis.estimates],
    }
    path = out_dir / "estimates.json"
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_estimates(path) -> tuple[dict, list]:
    """Load estimates.json; returns (metadata, list of PointEstimate)."""
    path = Path(path)
    if path.is_dir():
        path = path / "estimates.json"
    if not path.exists():
        raise FileNotFoundError(f"missing estimates file: {path}")
    with open(path) as fh:
        payload = json.load(fh)
    points = [estimate_from_dict(p) for p in payload.pop("points")]
    return payload, points

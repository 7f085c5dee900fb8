"""Precision/accuracy metrics over a phi sweep and the weak-vs-strong comparison.

Precision is the RMS of the per-point statistical standard deviations,
sigma_bar = sqrt(mean(sigma_i^2)); accuracy is the RMS deviation of the
measured points from the theoretical predictions, delta_bar =
sqrt(mean(|t_i - m_i|^2)), with phase differences taken on the circle.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, GridMismatchError
from .pipeline import AnalyzedCampaign
from .protocol import normalization_factor
from .qcore import DIRECTIONS, wrap_angle

PARAMETERS = ("nu", "theta", "phi")
REGIMES = ("weak", "strong")


def precision_rms(sigmas) -> float:
    """Root mean square of per-point standard deviations."""
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.size == 0:
        raise DomainError("precision_rms needs a non-empty list of sigmas")
    return float(np.sqrt(np.mean(np.abs(sigmas) ** 2)))


def accuracy_rms(measured, theory, circular: bool = False) -> float:
    """Root mean square deviation of measured values from theory.

    With circular=True the differences are wrapped to (-pi, pi] before
    squaring, so e.g. 179 deg vs -179 deg counts as 2 deg, not 358 deg.
    """
    measured = np.asarray(measured, dtype=float)
    theory = np.asarray(theory, dtype=float)
    if measured.size == 0 or measured.shape != theory.shape:
        raise DomainError(
            f"accuracy_rms needs equal-length non-empty inputs, got {measured.shape} vs {theory.shape}"
        )
    diffs = theory - measured
    if circular:
        diffs = np.array([wrap_angle(d) for d in diffs])
    return float(np.sqrt(np.mean(diffs**2)))


@dataclass(frozen=True)
class ComparisonReport:
    """The 12-cell weak-vs-strong table: precision and accuracy for nu, theta, phi.

    flags lists every (parameter, metric) where the strong regime fails to
    beat the weak one; an empty tuple reproduces the headline claim that the
    strong interaction wins across the board.
    """

    regimes: dict  # {"weak"/"strong": {param: {"precision", "accuracy"}, "time_per_point_s"}}
    meta: dict
    flags: tuple

    def to_dict(self) -> dict:
        return {"regimes": self.regimes, "meta": self.meta, "flags": list(self.flags)}

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonReport":
        return cls(regimes=data["regimes"], meta=data["meta"], flags=tuple(data["flags"]))

    def cell(self, regime: str, parameter: str, metric: str) -> float:
        return self.regimes[regime][parameter][metric]

    def ratio(self, parameter: str, metric: str) -> float:
        """sigma_bar(weak)/sigma_bar(strong) style ratio for one cell."""
        strong = self.cell("strong", parameter, metric)
        return math.inf if strong == 0.0 else self.cell("weak", parameter, metric) / strong


def _measured_and_sigmas(estimates, parameter: str):
    if parameter == "nu":
        return [e.state.nu for e in estimates], [e.state.sigma_nu for e in estimates]
    if parameter == "theta":
        return [e.state.theta_m for e in estimates], [e.state.sigma_theta for e in estimates]
    if parameter == "phi":
        return [e.state.phi_m for e in estimates], [e.state.sigma_phi for e in estimates]
    raise DomainError(f"unknown parameter {parameter!r}")


def theory_values(parameter: str, theta: float, phi_grid) -> list:
    if parameter == "nu":
        return [normalization_factor(theta, p) for p in phi_grid]
    if parameter == "theta":
        return [theta for _ in phi_grid]
    if parameter == "phi":
        return [wrap_angle(p) for p in phi_grid]
    raise DomainError(f"unknown parameter {parameter!r}")


def _config_hash(meta_entries: dict) -> str:
    return hashlib.sha256(json.dumps(meta_entries, sort_keys=True).encode()).hexdigest()[:16]


def build_comparison(
    weak_estimates,
    strong_estimates,
    theory: tuple,
    weak_time: float = 0.0,
    strong_time: float = 0.0,
    meta: dict | None = None,
) -> ComparisonReport:
    """Fill all 12 cells from two extracted campaigns over the same phi grid.

    theory is (theta, phi_grid) of the configured true state. Raises
    GridMismatchError unless both estimate sets cover exactly that grid.
    """
    theta_true, phi_grid = theory
    phi_grid = [float(p) for p in phi_grid]
    for label, estimates in (("weak", weak_estimates), ("strong", strong_estimates)):
        phis = [e.phi for e in estimates]
        if len(phis) != len(phi_grid) or not np.allclose(phis, phi_grid, rtol=0.0, atol=1e-12):
            raise GridMismatchError(f"{label} campaign phi grid does not match the theory grid")

    regimes = {}
    for label, estimates, time_s in (
        ("weak", weak_estimates, weak_time),
        ("strong", strong_estimates, strong_time),
    ):
        cells = {}
        for parameter in PARAMETERS:
            measured, sigmas = _measured_and_sigmas(estimates, parameter)
            cells[parameter] = {
                "precision": precision_rms(sigmas),
                "accuracy": accuracy_rms(
                    measured,
                    theory_values(parameter, theta_true, phi_grid),
                    circular=(parameter == "phi"),
                ),
            }
        cells["time_per_point_s"] = time_s
        regimes[label] = cells

    flags = tuple(
        f"{parameter} {metric}: strong >= weak"
        for parameter in PARAMETERS
        for metric in ("precision", "accuracy")
        if regimes["strong"][parameter][metric] >= regimes["weak"][parameter][metric]
    )

    meta = dict(meta or {})
    meta.setdefault("grid", {"theta_rad": theta_true, "phi_rad": phi_grid})
    meta["config_hash"] = _config_hash({k: v for k, v in meta.items() if k != "config_hash"})
    return ComparisonReport(regimes=regimes, meta=meta, flags=flags)


def _write_csv(path: Path, comment: str, header: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {comment}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")


def emit_outputs(
    report: ComparisonReport,
    weak: AnalyzedCampaign,
    strong: AnalyzedCampaign,
    out_dir,
) -> dict:
    """Write the Table-I analog (JSON + CSV) and the plot-data CSVs.

    state_estimates.csv holds the per-phi reconstructed parameters with error
    bars and theory curves (FIG.-3 analog); fringes.csv holds the raw and
    fitted interferograms (FIG.-2 analog). Figures themselves are out of
    scope; external plotting consumes these files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}

    json_path = out_dir / "comparison.json"
    with open(json_path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["comparison_json"] = json_path

    rows = [
        (regime, parameter, repr(report.cell(regime, parameter, "precision")),
         repr(report.cell(regime, parameter, "accuracy")))
        for parameter in PARAMETERS
        for regime in REGIMES
    ]
    table_path = out_dir / "comparison.csv"
    _write_csv(
        table_path,
        "precision/accuracy: RMS statistical error / RMS deviation from theory; "
        "nu dimensionless, theta and phi in radians",
        ["regime", "parameter", "precision", "accuracy"],
        rows,
    )
    paths["comparison_csv"] = table_path

    est_rows = []
    for regime, analysis in (("weak", weak), ("strong", strong)):
        config = analysis.campaign.config
        for parameter in PARAMETERS:
            measured, sigmas = _measured_and_sigmas(analysis.estimates, parameter)
            theory = theory_values(parameter, config.theta, config.phi_grid)
            for phi, m, s, t in zip(config.phi_grid, measured, sigmas, theory):
                est_rows.append((regime, parameter, repr(phi), repr(m), repr(s), repr(t)))
    est_path = out_dir / "state_estimates.csv"
    _write_csv(
        est_path,
        "per-phi reconstructed state parameters; phi_rad: preselected phase (rad); "
        "measured/sigma/theory: value, one-standard-deviation error, prediction "
        "(nu dimensionless; theta, phi in radians)",
        ["regime", "parameter", "phi_rad", "measured", "sigma", "theory"],
        est_rows,
    )
    paths["state_estimates_csv"] = est_path

    fringe_rows = []
    for regime, analysis in (("weak", weak), ("strong", strong)):
        config = analysis.campaign.config
        for phi, per_direction, phi_fits in zip(
            config.phi_grid, analysis.campaign.scans, analysis.fits
        ):
            for d in DIRECTIONS:
                scan = per_direction[d]
                f = phi_fits[d]
                for chi, counts in zip(scan.chi, scan.counts):
                    rate = counts / scan.time_per_point - scan.background_rate
                    model = f.offset + f.amplitude * math.cos(chi + f.phase)
                    fringe_rows.append(
                        (regime, d, repr(phi), repr(chi), repr(rate), repr(model))
                    )
    fringe_path = out_dir / "fringes.csv"
    _write_csv(
        fringe_path,
        "background-subtracted interferograms and their least-squares fits; "
        "chi_rad/phi_rad in radians; rate/fit_rate in counts per second",
        ["regime", "direction", "phi_rad", "chi_rad", "rate", "fit_rate"],
        fringe_rows,
    )
    paths["fringes_csv"] = fringe_path
    return paths

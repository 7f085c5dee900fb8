"""Virtual experiment: Poisson-noisy interferograms for the six analysis directions.

Counts are drawn from independent counter-based (Philox) substreams keyed by
(seed, stream kind, phi, chi), so adding or removing grid points never perturbs
the counts of the remaining points and parallel generation is bit-identical to
serial. Background enters the detector as part of the in-beam rate and is
estimated from a separate dedicated Poisson measurement per scan, mirroring a
beam-blocked background run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, MissingDirectionError
from .protocol import closed_form_fringes, pipeline_fringes
from .qcore import DIRECTIONS

#: Direction label of the spin-analysis-free calibration interferogram.
CALIBRATION_DIRECTION = "cal"

# Substream kinds; 0..5 are the analysis directions in DIRECTIONS order.
_KIND_BY_DIRECTION = {d: i for i, d in enumerate(DIRECTIONS)}
_KIND_BACKGROUND = 6
_KIND_CALIBRATION = 7
_KIND_CALIBRATION_BACKGROUND = 8


def default_chi_grid(n_points: int = 16) -> tuple[float, ...]:
    """Equally spaced phase-shifter positions over [0, 2 pi)."""
    return tuple(2.0 * math.pi * k / n_points for k in range(n_points))


def default_phi_grid(n_points: int = 13, span_deg: float = 150.0) -> tuple[float, ...]:
    """Equally spaced preselection phases over [-span, +span] degrees."""
    return tuple(np.radians(np.linspace(-span_deg, span_deg, n_points)))


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one simulated measurement campaign."""

    alpha: float  # coupling strength, radians
    time_per_point: float  # seconds
    theta: float = math.pi / 2.0  # preselected weight, radians
    phi_grid: tuple = field(default_factory=default_phi_grid)
    chi_grid: tuple = field(default_factory=default_chi_grid)
    peak_rate: float = 5.0  # counts/second at unit intensity
    background_rate: float = 0.5  # counts/second
    contrast: float = 1.0
    rng_seed: int = 0
    regime_label: str = ""
    noise: bool = True  # False: scans carry exact expected counts

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi_grid", tuple(float(p) for p in self.phi_grid))
        object.__setattr__(self, "chi_grid", tuple(float(c) for c in self.chi_grid))
        problems = []
        if not self.time_per_point > 0.0:
            problems.append(f"time_per_point must be > 0, got {self.time_per_point}")
        if not self.peak_rate > 0.0:
            problems.append(f"peak_rate must be > 0, got {self.peak_rate}")
        if self.background_rate < 0.0:
            problems.append(f"background_rate must be >= 0, got {self.background_rate}")
        if not 0.0 <= self.contrast <= 1.0:
            problems.append(f"contrast must lie in [0, 1], got {self.contrast}")
        if len(self.phi_grid) == 0:
            problems.append("phi_grid must be non-empty")
        if len(self.chi_grid) == 0:
            problems.append("chi_grid must be non-empty")
        if not 0.0 <= self.theta <= math.pi:
            problems.append(f"theta must lie in [0, pi], got {self.theta}")
        if not 0 <= int(self.rng_seed) < 2**64:
            problems.append(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}")
        if problems:
            raise ConfigError("; ".join(problems))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "theta": self.theta,
            "phi_grid": list(self.phi_grid),
            "chi_grid": list(self.chi_grid),
            "time_per_point": self.time_per_point,
            "peak_rate": self.peak_rate,
            "background_rate": self.background_rate,
            "contrast": self.contrast,
            "rng_seed": self.rng_seed,
            "regime_label": self.regime_label,
            "noise": self.noise,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class FringeScan:
    """One interferogram: counts over the chi grid for a single analysis direction."""

    direction: str
    chi: tuple
    counts: tuple
    time_per_point: float
    background_rate: float  # estimated counts/second
    background_sigma: float  # standard deviation of the estimate
    phi: float = 0.0
    alpha: float = 0.0
    regime_label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "chi", tuple(float(c) for c in self.chi))
        object.__setattr__(self, "counts", tuple(float(c) for c in self.counts))
        if len(self.chi) != len(self.counts):
            raise ConfigError(
                f"chi and counts lengths differ: {len(self.chi)} vs {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise ConfigError("counts must be non-negative")


@dataclass(frozen=True)
class CampaignResult:
    """All raw scans of one campaign: six directions per phi plus the calibration."""

    config: ExperimentConfig
    scans: tuple  # one dict {direction: FringeScan} per phi in config.phi_grid
    calibration: FringeScan

    def __post_init__(self) -> None:
        object.__setattr__(self, "scans", tuple(dict(s) for s in self.scans))


def _float_bits(x: float) -> int:
    return int(np.float64(x).view(np.uint64))


def _point_rng(seed: int, kind: int, phi: float, chi: float) -> np.random.Generator:
    """Independent counter-based substream for one sample point."""
    entropy = (int(seed), kind, _float_bits(phi), _float_bits(chi))
    return np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(entropy)))


def _calibration_intensity(config: ExperimentConfig, chi: float) -> float:
    # Spin-analysis-free, alpha = 0 interferogram at phi = 0: both spin outcomes summed.
    return (1.0 + config.contrast * math.cos(chi)) / 2.0


def expected_rate(config: ExperimentConfig, direction: str, phi: float, chi: float) -> float:
    """Detector rate background + peak * I_direction(phi, chi, alpha, contrast)."""
    if config.theta == math.pi / 2.0:
        intensities = closed_form_fringes(phi, chi, config.alpha, config.contrast)
    else:
        intensities = pipeline_fringes(config.theta, phi, chi, config.alpha, config.contrast)
    return config.background_rate + config.peak_rate * intensities.as_dict()[direction]


def _draw_counts(config: ExperimentConfig, kind: int, phi: float, chi: float, mean: float) -> float:
    if not config.noise:
        return mean
    return float(_point_rng(config.rng_seed, kind, phi, chi).poisson(mean))


def _background_estimate(
    config: ExperimentConfig, kind: int, phi: float, tag: float
) -> tuple[float, float]:
    """Dedicated background run of one scan's duration; returns (rate, sigma)."""
    duration = config.time_per_point * len(config.chi_grid)
    counts = _draw_counts(config, kind, phi, tag, config.background_rate * duration)
    if not config.noise:
        return config.background_rate, 0.0
    return counts / duration, math.sqrt(counts) / duration


def sample_scan(config: ExperimentConfig, direction: str, phi: float) -> FringeScan:
    """Draw one interferogram; deterministic for fixed (config, seed)."""
    kind = _KIND_BY_DIRECTION[direction]
    counts = []
    for chi in config.chi_grid:
        mean = expected_rate(config, direction, phi, chi) * config.time_per_point
        counts.append(_draw_counts(config, kind, phi, chi, mean))
    bg_rate, bg_sigma = _background_estimate(config, _KIND_BACKGROUND, phi, float(kind))
    return FringeScan(
        direction=direction,
        chi=config.chi_grid,
        counts=tuple(counts),
        time_per_point=config.time_per_point,
        background_rate=bg_rate,
        background_sigma=bg_sigma,
        phi=phi,
        alpha=config.alpha,
        regime_label=config.regime_label,
    )


def run_direction_set(config: ExperimentConfig, phi: float) -> dict:
    """All six analysis directions at one preselected phase, independent streams."""
    return {d: sample_scan(config, d, phi) for d in DIRECTIONS}


def calibration_scan(config: ExperimentConfig) -> FringeScan:
    """Spin-analysis-free interferogram at alpha = 0 whose visibility estimates the contrast."""
    counts = []
    for chi in config.chi_grid:
        mean = (config.background_rate + config.peak_rate * _calibration_intensity(config, chi))
        counts.append(_draw_counts(config, _KIND_CALIBRATION, 0.0, chi, mean * config.time_per_point))
    bg_rate, bg_sigma = _background_estimate(config, _KIND_CALIBRATION_BACKGROUND, 0.0, 0.0)
    return FringeScan(
        direction=CALIBRATION_DIRECTION,
        chi=config.chi_grid,
        counts=tuple(counts),
        time_per_point=config.time_per_point,
        background_rate=bg_rate,
        background_sigma=bg_sigma,
        phi=0.0,
        alpha=0.0,
        regime_label=config.regime_label,
    )


def run_campaign(config: ExperimentConfig) -> CampaignResult:
    """The full raw dataset: six scans per phi plus the contrast calibration."""
    scans = tuple(run_direction_set(config, phi) for phi in config.phi_grid)
    return CampaignResult(config=config, scans=scans, calibration=calibration_scan(config))


# ---------------------------------------------------------------------------
# Campaign persistence: scans.csv + config.json (+ scan_meta.json with the
# per-scan background estimates, which are measurements, not configuration).

SCAN_COLUMNS = ("chi_rad", "counts", "time_s", "direction", "phi_rad", "alpha_rad", "seed")


def _fmt(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _scan_rows(scan: FringeScan, seed: int) -> list:
    return [
        (_fmt(chi), _fmt(c), _fmt(scan.time_per_point), scan.direction, _fmt(scan.phi), _fmt(scan.alpha), str(seed))
        for chi, c in zip(scan.chi, scan.counts)
    ]


def write_campaign(campaign: CampaignResult, out_dir) -> dict:
    """Write scans.csv, config.json and scan_meta.json; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = campaign.config

    rows = []
    meta = []
    for phi, per_direction in zip(config.phi_grid, campaign.scans):
        for d in DIRECTIONS:
            scan = per_direction[d]
            rows.extend(_scan_rows(scan, config.rng_seed))
            meta.append(
                {
                    "phi_rad": phi,
                    "direction": d,
                    "background_rate": scan.background_rate,
                    "background_sigma": scan.background_sigma,
                }
            )
    rows.extend(_scan_rows(campaign.calibration, config.rng_seed))
    meta.append(
        {
            "phi_rad": 0.0,
            "direction": CALIBRATION_DIRECTION,
            "background_rate": campaign.calibration.background_rate,
            "background_sigma": campaign.calibration.background_sigma,
        }
    )

    scans_path = out_dir / "scans.csv"
    with open(scans_path, "w", newline="") as fh:
        fh.write("# chi_rad: phase shifter position (rad); counts: detector counts per point; "
                 "time_s: counting time per point (s); phi_rad/alpha_rad: preselected phase and "
                 "coupling strength (rad); seed: campaign RNG seed\n")
        fh.write(",".join(SCAN_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")

    config_path = out_dir / "config.json"
    with open(config_path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    meta_path = out_dir / "scan_meta.json"
    with open(meta_path, "w") as fh:
        json.dump({"background_estimates": meta}, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return {"scans": scans_path, "config": config_path, "meta": meta_path}


def read_campaign(in_dir) -> CampaignResult:
    """Reassemble a CampaignResult from a directory written by write_campaign."""
    in_dir = Path(in_dir)
    config_path = in_dir / "config.json"
    if not config_path.exists():
        raise FileNotFoundError(f"missing config file: {config_path}")
    with open(config_path) as fh:
        config = ExperimentConfig.from_dict(json.load(fh))

    meta_path = in_dir / "scan_meta.json"
    background = {}
    if meta_path.exists():
        with open(meta_path) as fh:
            for entry in json.load(fh)["background_estimates"]:
                key = (entry["phi_rad"], entry["direction"])
                background[key] = (entry["background_rate"], entry["background_sigma"])

    scans_path = in_dir / "scans.csv"
    if not scans_path.exists():
        raise FileNotFoundError(f"missing scans file: {scans_path}")
    grouped: dict = {}
    with open(scans_path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith(SCAN_COLUMNS[0]):
                continue
            chi, counts, time_s, direction, phi, alpha, _seed = line.split(",")
            key = (float(phi), direction)
            grouped.setdefault(key, {"chi": [], "counts": [], "time": float(time_s), "alpha": float(alpha)})
            grouped[key]["chi"].append(float(chi))
            grouped[key]["counts"].append(float(counts))

    def build(phi: float, direction: str) -> FringeScan:
        data = grouped[(phi, direction)]
        bg_rate, bg_sigma = background.get((phi, direction), (config.background_rate, 0.0))
        return FringeScan(
            direction=direction,
            chi=tuple(data["chi"]),
            counts=tuple(data["counts"]),
            time_per_point=data["time"],
            background_rate=bg_rate,
            background_sigma=bg_sigma,
            phi=phi,
            alpha=data["alpha"],
            regime_label=config.regime_label,
        )

    missing = sorted(
        {d for phi in config.phi_grid for d in DIRECTIONS if (phi, d) not in grouped}
    )
    if missing:
        raise MissingDirectionError(
            f"campaign at {in_dir} is missing scans for directions: {', '.join(missing)}"
        )

    scans = tuple({d: build(phi, d) for d in DIRECTIONS} for phi in config.phi_grid)
    if (0.0, CALIBRATION_DIRECTION) not in grouped:
        raise MissingDirectionError(f"campaign at {in_dir} is missing the calibration scan")
    calibration = build(0.0, CALIBRATION_DIRECTION)
    return CampaignResult(config=config, scans=scans, calibration=calibration)


def noiseless(config: ExperimentConfig) -> ExperimentConfig:
    """Copy of a config with Poisson sampling disabled (exact expected counts)."""
    return replace(config, noise=False)

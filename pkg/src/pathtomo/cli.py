"""Command-line front end: oracle, simulate, extract, compare.

Angles on the command line are given in degrees (matching the 15/90 degree
idiom of the experiment); everything is stored internally in radians. Exit
codes: 0 success, 1 I/O, 2 validation or physics domain, 3 assertion-mode
failure (--assert-strong-wins with a losing strong cell).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import extract, pipeline, protocol, qcore, report, sim
from .errors import DomainError

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_ASSERTION = 3

PRESET_NAMES = ("weak", "strong")


def preset_config(name: str, seed: int | None = None) -> sim.ExperimentConfig:
    """Shipped campaign presets: weak (15 deg, 540 s/point), strong (90 deg, 290 s/point).

    Both sweep 13 phases over +-90 deg, where the strong scheme beats the weak
    one on every parameter; toward the +-150 deg grid edges postselection
    becomes near-orthogonal and the normalization noise swamps both schemes.
    """
    if name not in PRESET_NAMES:
        raise DomainError(f"unknown preset {name!r}, expected one of {PRESET_NAMES}")
    text = resources.files("pathtomo").joinpath(f"presets/{name}.json").read_text()
    config = sim.ExperimentConfig.from_dict(json.loads(text))
    if seed is not None:
        config = replace(config, rng_seed=seed)
    return config


def load_config(spec: str, seed: int | None = None) -> sim.ExperimentConfig:
    """Resolve --config: a preset name or a path to a JSON config file."""
    if spec in PRESET_NAMES:
        return preset_config(spec, seed)
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(f"missing config file: {path}")
    with open(path) as fh:
        config = sim.ExperimentConfig.from_dict(json.load(fh))
    if seed is not None:
        config = replace(config, rng_seed=seed)
    return config


def _write_manifest(out_dir: Path, subcommand: str, config_spec: str, seed: int | None) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config_spec,
        "output_dir": str(out_dir),
        "seed_override": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_oracle(args) -> int:
    theta = math.radians(args.theta)
    phi = math.radians(args.phi)
    alpha = math.radians(args.alpha)

    path_initial = qcore.make_path_state(theta, phi)
    analytic = protocol.weak_value_sigma_z(path_initial, qcore.path_x_plus())
    intensities = protocol.ideal_intensities(theta, phi, alpha)
    measured = extract.extract_weak_value(intensities, alpha)
    pi_plus, pi_minus = protocol.projector_weak_values(analytic)
    residual = max(
        abs(measured.re - analytic.real),
        abs(measured.im - analytic.imag),
        abs(measured.modulus - abs(analytic)),
    )

    print(f"preselected state: theta = {args.theta:.4f} deg, phi = {args.phi:.4f} deg")
    print(f"coupling strength: alpha = {args.alpha:.4f} deg")
    print(f"weak value <sigma_z>_w     = {analytic.real:+.9f} {analytic.imag:+.9f}i")
    print(f"projector weak values      = {pi_plus:.9f}, {pi_minus:.9f}")
    print("ideal intensities (x+, x-, y+, y-, z+, z-):")
    print("  " + ", ".join(f"{v:.9f}" for v in intensities.as_array()))
    print(
        f"extracted (re, im, |w|)    = {measured.re:+.9f}, {measured.im:+.9f}, {measured.modulus:.9f}"
    )
    print(f"extraction round-trip residual = {residual:.3e}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = load_config(args.config, args.seed)
    campaign_scans = None
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            campaign_scans = list(pool.map(lambda p: sim.run_direction_set(config, p), config.phi_grid))
        campaign = sim.CampaignResult(
            config=config, scans=tuple(campaign_scans), calibration=sim.calibration_scan(config)
        )
    else:
        campaign = sim.run_campaign(config)
    out_dir = Path(args.out)
    paths = sim.write_campaign(campaign, out_dir)
    _write_manifest(out_dir, "simulate", args.config, args.seed)
    n_scans = len(config.phi_grid) * len(qcore.DIRECTIONS) + 1
    print(f"wrote {n_scans} scans ({len(config.phi_grid)} phi points) to {paths['scans']}")
    return EXIT_OK


def cmd_extract(args) -> int:
    campaign = sim.read_campaign(args.campaign_dir)
    analysis = pipeline.analyze_campaign(campaign)
    out_dir = Path(args.out if args.out else args.campaign_dir)
    path = pipeline.write_estimates(analysis, out_dir)
    _write_manifest(out_dir, "extract", str(args.campaign_dir), args.seed)
    print(
        f"extracted {len(analysis.estimates)} phi points "
        f"(contrast estimate {analysis.contrast:.4f} +- {analysis.contrast_sigma:.4f}) to {path}"
    )
    return EXIT_OK


def _print_table(rep: report.ComparisonReport) -> None:
    print(f"{'':8s}{'precision sigma_bar':>34s}{'accuracy delta_bar':>34s}")
    header = f"{'weak':>12s}{'strong':>11s}{'ratio':>11s}"
    print(f"{'param':8s}{header}{header}")
    for parameter in report.PARAMETERS:
        row = f"{parameter:8s}"
        for metric in ("precision", "accuracy"):
            weak_v = rep.cell("weak", parameter, metric)
            strong_v = rep.cell("strong", parameter, metric)
            row += f"{weak_v:12.4f}{strong_v:11.4f}{rep.ratio(parameter, metric):11.2f}"
        print(row)


def cmd_compare(args) -> int:
    weak_meta, weak_points = pipeline.read_estimates(args.weak_dir)
    strong_meta, strong_points = pipeline.read_estimates(args.strong_dir)
    if abs(weak_meta["theta_rad"] - strong_meta["theta_rad"]) > 1e-12:
        raise DomainError("weak and strong campaigns were prepared with different theta")

    meta = {
        "weak": {"seed": weak_meta["rng_seed"], "time_per_point_s": weak_meta["time_per_point_s"]},
        "strong": {
            "seed": strong_meta["rng_seed"],
            "time_per_point_s": strong_meta["time_per_point_s"],
        },
    }
    rep = report.build_comparison(
        weak_points,
        strong_points,
        theory=(weak_meta["theta_rad"], weak_meta["phi_grid"]),
        weak_time=weak_meta["time_per_point_s"],
        strong_time=strong_meta["time_per_point_s"],
        meta=meta,
    )

    weak_analysis = pipeline.analyze_campaign(sim.read_campaign(args.weak_dir))
    strong_analysis = pipeline.analyze_campaign(sim.read_campaign(args.strong_dir))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = report.emit_outputs(rep, weak_analysis, strong_analysis, out_dir)
    _write_manifest(out_dir, "compare", f"{args.weak_dir},{args.strong_dir}", None)

    _print_table(rep)
    for flag in rep.flags:
        print(f"flag: {flag}")
    print(f"report written to {paths['comparison_json']}")
    if args.assert_strong_wins and rep.flags:
        print("assertion failed: strong regime does not win every cell", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathtomo",
        description="Direct path-state characterization via weak values at arbitrary coupling strength.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    oracle = sub.add_parser("oracle", help="print analytic weak value, intensities and round-trip residual")
    oracle.add_argument("--theta", type=float, default=90.0, help="preselected weight, degrees")
    oracle.add_argument("--phi", type=float, default=90.0, help="preselected phase, degrees")
    oracle.add_argument("--alpha", type=float, default=90.0, help="coupling strength, degrees")
    oracle.set_defaults(func=cmd_oracle)

    simulate = sub.add_parser("simulate", help="generate a campaign of Poisson-noisy interferograms")
    simulate.add_argument("--config", required=True, help="preset name (weak/strong) or JSON config path")
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.add_argument("--seed", type=int, default=None, help="override the config RNG seed")
    simulate.add_argument("--jobs", type=int, default=1, help="parallel workers across phi points")
    simulate.set_defaults(func=cmd_simulate)

    extract_p = sub.add_parser("extract", help="fit, contrast-correct and invert a stored campaign")
    extract_p.add_argument("campaign_dir", help="directory written by `simulate`")
    extract_p.add_argument("--out", default=None, help="output directory (default: campaign dir)")
    extract_p.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
    extract_p.set_defaults(func=cmd_extract)

    compare = sub.add_parser("compare", help="build the weak-vs-strong precision/accuracy table")
    compare.add_argument("weak_dir", help="extracted weak-regime campaign directory")
    compare.add_argument("strong_dir", help="extracted strong-regime campaign directory")
    compare.add_argument("--out", required=True, help="output directory for report files")
    compare.add_argument(
        "--assert-strong-wins",
        action="store_true",
        help="exit with code 3 unless the strong regime wins every cell",
    )
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

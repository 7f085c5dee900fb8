"""Tests for the command-line interface: subcommands, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from pathtomo.cli import EXIT_ASSERTION, EXIT_DOMAIN, EXIT_IO, EXIT_OK, main, preset_config
from pathtomo.pipeline import read_estimates
from pathtomo.qcore import wrap_angle
from pathtomo.sim import ExperimentConfig


def tiny_config(**overrides) -> dict:
    config = ExperimentConfig(
        alpha=math.radians(15.0),
        time_per_point=20.0,
        peak_rate=60.0,
        background_rate=1.0,
        contrast=0.75,
        phi_grid=tuple(np.linspace(-1.2, 1.2, 5)),
        rng_seed=13,
        regime_label="weak",
    ).to_dict()
    config.update(overrides)
    return config


def write_config(tmp_path, name="config.json", **overrides):
    path = tmp_path / name
    with open(path, "w") as fh:
        json.dump(tiny_config(**overrides), fh)
    return path


def data_bytes(directory):
    return {
        name: (directory / name).read_bytes()
        for name in ("scans.csv", "config.json", "scan_meta.json")
    }


def test_oracle_happy_path(capsys):
    assert main(["oracle", "--theta", "90", "--phi", "90", "--alpha", "90"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-1.000000000i" in out.replace("+-", "-").replace(" ", " ")
    residual = float(out.rsplit("=", 1)[1])
    assert residual < 1e-9


def test_oracle_rejects_orthogonal_postselection(capsys):
    assert main(["oracle", "--theta", "90", "--phi", "180", "--alpha", "90"]) == EXIT_DOMAIN
    assert "weak value undefined" in capsys.readouterr().err


def test_oracle_rejects_tiny_alpha(capsys):
    assert main(["oracle", "--theta", "90", "--phi", "45", "--alpha", "0.5"]) == EXIT_DOMAIN
    assert "alpha" in capsys.readouterr().err


def test_oracle_rejects_bad_theta():
    assert main(["oracle", "--theta", "200", "--phi", "0", "--alpha", "90"]) == EXIT_DOMAIN


def test_simulate_writes_expected_grid(tmp_path, capsys):
    config_path = write_config(tmp_path)
    out = tmp_path / "campaign"
    assert main(["simulate", "--config", str(config_path), "--out", str(out)]) == EXIT_OK
    lines = (out / "scans.csv").read_text().splitlines()
    data_rows = [l for l in lines if l and not l.startswith("#") and not l.startswith("chi_rad")]
    chi_points = len(tiny_config()["chi_grid"])
    assert len(data_rows) == (5 * 6 + 1) * chi_points  # six directions per phi + calibration
    assert (out / "config.json").exists() and (out / "manifest.json").exists()


def test_simulate_is_byte_identical_for_fixed_seed(tmp_path):
    config_path = write_config(tmp_path)
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(config_path), "--out", str(first)]) == EXIT_OK
    assert main(["simulate", "--config", str(config_path), "--out", str(second)]) == EXIT_OK
    assert data_bytes(first) == data_bytes(second)

    reseeded = tmp_path / "c"
    assert main(["simulate", "--config", str(config_path), "--out", str(reseeded), "--seed", "999"]) == EXIT_OK
    assert data_bytes(reseeded)["scans.csv"] != data_bytes(first)["scans.csv"]


def test_parallel_simulation_matches_serial(tmp_path):
    config_path = write_config(tmp_path)
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    assert main(["simulate", "--config", str(config_path), "--out", str(serial)]) == EXIT_OK
    assert (
        main(["simulate", "--config", str(config_path), "--out", str(parallel), "--jobs", "4"])
        == EXIT_OK
    )
    assert data_bytes(serial) == data_bytes(parallel)


def test_simulate_missing_config_is_io_error(tmp_path, capsys):
    out = tmp_path / "campaign"
    assert main(["simulate", "--config", str(tmp_path / "nope.json"), "--out", str(out)]) == EXIT_IO


def test_simulate_invalid_config_names_fields(tmp_path, capsys):
    config_path = write_config(tmp_path, time_per_point=0.0, peak_rate=-2.0)
    out = tmp_path / "campaign"
    assert main(["simulate", "--config", str(config_path), "--out", str(out)]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert "time_per_point" in err and "peak_rate" in err


def test_extract_noiseless_round_trip(tmp_path):
    config_path = write_config(tmp_path, noise=False)
    campaign = tmp_path / "campaign"
    assert main(["simulate", "--config", str(config_path), "--out", str(campaign)]) == EXIT_OK
    assert main(["extract", str(campaign)]) == EXIT_OK
    meta, points = read_estimates(campaign)
    assert len(points) == 5
    for point in points:
        assert abs(wrap_angle(point.state.phi_m - point.phi)) < 1e-6


def test_extract_names_missing_directions(tmp_path, capsys):
    config_path = write_config(tmp_path, noise=False)
    campaign = tmp_path / "campaign"
    main(["simulate", "--config", str(config_path), "--out", str(campaign)])
    scans = campaign / "scans.csv"
    kept = [l for l in scans.read_text().splitlines() if ",y+," not in l and ",y-," not in l]
    scans.write_text("\n".join(kept) + "\n")
    assert main(["extract", str(campaign)]) == EXIT_IO
    err = capsys.readouterr().err
    assert "y+" in err and "y-" in err


def test_compare_full_chain_and_assertion_mode(tmp_path, capsys):
    weak_path = write_config(tmp_path, name="weak.json")
    strong_cfg = tiny_config(
        alpha=math.pi / 2, time_per_point=11.0, regime_label="strong", rng_seed=14
    )
    strong_path = tmp_path / "strong.json"
    with open(strong_path, "w") as fh:
        json.dump(strong_cfg, fh)

    weak_dir, strong_dir = tmp_path / "w", tmp_path / "s"
    for config_path, out in ((weak_path, weak_dir), (strong_path, strong_dir)):
        assert main(["simulate", "--config", str(config_path), "--out", str(out)]) == EXIT_OK
        assert main(["extract", str(out)]) == EXIT_OK

    report_dir = tmp_path / "report"
    code = main(["compare", str(weak_dir), str(strong_dir), "--out", str(report_dir)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "precision" in out and "nu" in out
    for name in ("comparison.json", "comparison.csv", "state_estimates.csv", "fringes.csv"):
        assert (report_dir / name).exists()

    # identical directories: every ratio is 1, flags raised, assertion mode trips
    code = main(
        ["compare", str(weak_dir), str(weak_dir), "--out", str(tmp_path / "same"),
         "--assert-strong-wins"]
    )
    assert code == EXIT_ASSERTION
    with open(tmp_path / "same" / "comparison.json") as fh:
        payload = json.load(fh)
    for parameter in ("nu", "theta", "phi"):
        weak_cell = payload["regimes"]["weak"][parameter]
        strong_cell = payload["regimes"]["strong"][parameter]
        assert weak_cell == strong_cell
    assert len(payload["flags"]) == 6


def test_compare_grid_mismatch(tmp_path):
    base = write_config(tmp_path, name="a.json")
    other = write_config(tmp_path, name="b.json", phi_grid=list(np.linspace(-1.0, 1.0, 7)))
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    for config_path, out in ((base, a_dir), (other, b_dir)):
        main(["simulate", "--config", str(config_path), "--out", str(out)])
        main(["extract", str(out)])
    assert main(["compare", str(a_dir), str(b_dir), "--out", str(tmp_path / "r")]) == EXIT_DOMAIN


def test_presets_are_loadable_and_paper_like():
    weak = preset_config("weak")
    strong = preset_config("strong")
    assert weak.alpha == pytest.approx(math.radians(15.0))
    assert strong.alpha == pytest.approx(math.radians(90.0))
    assert weak.time_per_point == 540.0
    assert strong.time_per_point == 290.0
    assert weak.phi_grid == strong.phi_grid
    assert len(weak.phi_grid) == 13

"""Tests for the precision/accuracy metrics and the comparison report."""

import json
import math

import numpy as np
import pytest

from pathtomo.errors import DomainError, GridMismatchError
from pathtomo.extract import PointEstimate, extract_weak_value, propagate_errors, reconstruct_state
from pathtomo.protocol import IntensitySet, ideal_intensities
from pathtomo.report import (
    PARAMETERS,
    ComparisonReport,
    accuracy_rms,
    build_comparison,
    precision_rms,
    theory_values,
)


def test_precision_rms_examples():
    assert precision_rms([0.1, 0.1, 0.1]) == pytest.approx(0.1)
    assert precision_rms([3.0, 4.0]) == pytest.approx(math.sqrt(12.5))
    assert precision_rms([0.7]) == pytest.approx(0.7)
    with pytest.raises(DomainError):
        precision_rms([])


def test_accuracy_rms_examples():
    assert accuracy_rms([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert accuracy_rms([0.0], [0.5]) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        accuracy_rms([1.0], [1.0, 2.0])


def test_accuracy_rms_wraps_phases_on_the_circle():
    measured = [math.radians(179.0)]
    theory = [math.radians(-179.0)]
    assert accuracy_rms(measured, theory, circular=True) == pytest.approx(
        math.radians(2.0), abs=1e-12
    )
    assert accuracy_rms(measured, theory, circular=False) == pytest.approx(
        math.radians(358.0), abs=1e-12
    )


def test_rms_invariances():
    rng = np.random.default_rng(30)
    values = rng.uniform(0.01, 2.0, size=11)
    shuffled = rng.permutation(values)
    assert precision_rms(values) == pytest.approx(precision_rms(shuffled), rel=1e-12)
    k = 3.7
    assert precision_rms(k * values) == pytest.approx(k * precision_rms(values), rel=1e-12)
    theory = rng.uniform(-1, 1, size=11)
    measured = rng.uniform(-1, 1, size=11)
    assert accuracy_rms(k * measured, k * theory) == pytest.approx(
        k * accuracy_rms(measured, theory), rel=1e-12
    )


def _noiseless_estimates(theta, phi_grid, alpha, label):
    zeros = IntensitySet(0, 0, 0, 0, 0, 0)
    out = []
    for phi in phi_grid:
        wv, state = propagate_errors(ideal_intensities(theta, phi, alpha), zeros, alpha)
        out.append(
            PointEstimate(
                phi=phi, alpha=alpha, weak_value=wv, state=state, contrast=1.0,
                contrast_sigma=0.0, regime_label=label,
            )
        )
    return out


def test_identical_inputs_raise_every_flag():
    grid = tuple(np.linspace(-1.0, 1.0, 7))
    estimates = _noiseless_estimates(math.pi / 2, grid, 0.9, "x")
    report = build_comparison(estimates, estimates, (math.pi / 2, grid), 10.0, 10.0)
    assert len(report.flags) == 6
    for p in PARAMETERS:
        assert report.cell("weak", p, "precision") == report.cell("strong", p, "precision")
        assert report.cell("weak", p, "accuracy") == report.cell("strong", p, "accuracy")


def test_noiseless_campaigns_have_zero_error():
    grid = tuple(np.linspace(-1.2, 1.2, 9))
    weak = _noiseless_estimates(math.pi / 2, grid, math.radians(15.0), "weak")
    strong = _noiseless_estimates(math.pi / 2, grid, math.pi / 2, "strong")
    report = build_comparison(weak, strong, (math.pi / 2, grid), 540.0, 290.0)
    for regime in ("weak", "strong"):
        for p in PARAMETERS:
            assert report.cell(regime, p, "accuracy") < 1e-6
            assert report.cell(regime, p, "precision") == 0.0


def test_grid_mismatch_is_rejected():
    grid = tuple(np.linspace(-1.0, 1.0, 7))
    other = tuple(np.linspace(-1.0, 1.0, 9))
    weak = _noiseless_estimates(math.pi / 2, grid, 0.3, "weak")
    strong = _noiseless_estimates(math.pi / 2, other, 1.5, "strong")
    with pytest.raises(GridMismatchError):
        build_comparison(weak, strong, (math.pi / 2, grid), 1.0, 1.0)


def test_report_serialization_round_trips():
    grid = tuple(np.linspace(-1.0, 1.0, 5))
    weak = _noiseless_estimates(math.pi / 2, grid, 0.3, "weak")
    strong = _noiseless_estimates(math.pi / 2, grid, 1.5, "strong")
    report = build_comparison(weak, strong, (math.pi / 2, grid), 540.0, 290.0, meta={"seed": 7})
    reparsed = ComparisonReport.from_dict(json.loads(json.dumps(report.to_dict())))
    assert reparsed == report
    assert report.meta["config_hash"]


def test_theory_values_cover_all_parameters():
    grid = (0.0, math.pi / 2)
    assert theory_values("nu", math.pi / 2, grid) == pytest.approx([math.sqrt(2.0), 1.0])
    assert theory_values("theta", 1.0, grid) == [1.0, 1.0]
    assert theory_values("phi", 1.0, grid) == pytest.approx([0.0, math.pi / 2])
    with pytest.raises(DomainError):
        theory_values("mystery", 1.0, grid)

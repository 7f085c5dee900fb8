"""Weighted linear least-squares fringe fitting with exact covariance.

The fringe frequency in chi is fixed at 1 by the model, so the fit
rate(chi) = A + P cos(chi) + Q sin(chi) is plain linear least squares: a
unique global optimum, no iteration, no initialization. Weights are inverse
Poisson variances with a floor of one count per point, plus the variance of
the subtracted background estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AllZeroCountsError, DegenerateDesignError, DomainError
from .qcore import wrap_angle
from .sim import FringeScan


@dataclass(frozen=True)
class FringeFit:
    """Fitted fringe rate(chi) = offset + amplitude * cos(chi + phase).

    covariance is the 3x3 matrix of the linear parameters (A, P, Q) of
    rate = A + P cos chi + Q sin chi; amplitude = sqrt(P^2 + Q^2) >= 0 and
    phase = atan2(-Q, P) in (-pi, pi]. goodness is the reduced chi-square.
    """

    offset: float
    amplitude: float
    phase: float
    covariance: np.ndarray
    goodness: float

    def __post_init__(self) -> None:
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (3, 3):
            raise DomainError(f"covariance must be 3x3, got {cov.shape}")
        cov.flags.writeable = False
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "phase", wrap_angle(self.phase))

    @property
    def p(self) -> float:
        """Cosine quadrature P = amplitude * cos(phase)."""
        return self.amplitude * math.cos(self.phase)

    @property
    def q(self) -> float:
        """Sine quadrature Q = -amplitude * sin(phase)."""
        return -self.amplitude * math.sin(self.phase)


def fit_sinusoid(scan: FringeScan) -> FringeFit:
    """Background-subtracted weighted fit of one interferogram."""
    chi = np.asarray(scan.chi, dtype=float)
    counts = np.asarray(scan.counts, dtype=float)
    n = chi.size
    if n < 4:
        raise DegenerateDesignError(f"need at least 4 scan points, got {n}")
    if np.max(counts) <= 0.0:
        raise AllZeroCountsError("scan contains no counts")
    if np.max(chi) - np.min(chi) < math.pi:
        raise DegenerateDesignError(
            f"chi grid spans {np.max(chi) - np.min(chi):.3f} rad, less than half a period"
        )

    t = scan.time_per_point
    rates = counts / t - scan.background_rate
    variances = np.maximum(counts, 1.0) / t**2 + scan.background_sigma**2
    weights = 1.0 / variances

    design = np.column_stack([np.ones(n), np.cos(chi), np.sin(chi)])
    sqrt_w = np.sqrt(weights)
    beta, *_ = np.linalg.lstsq(design * sqrt_w[:, None], rates * sqrt_w, rcond=None)
    normal = design.T @ (design * weights[:, None])
    covariance = np.linalg.inv(normal)

    residuals = rates - design @ beta
    goodness = float(np.sum(weights * residuals**2) / (n - 3))

    a, p, q = (float(b) for b in beta)
    return FringeFit(
        offset=a,
        amplitude=math.hypot(p, q),
        phase=math.atan2(-q, p),
        covariance=covariance,
        goodness=goodness,
    )


def intensity_at_zero(fit: FringeFit) -> tuple[float, float]:
    """Model rate at chi = 0, i.e. A + P, and its propagated standard deviation."""
    value = fit.offset + fit.p
    cov = fit.covariance
    variance = cov[0, 0] + cov[1, 1] + 2.0 * cov[0, 1]
    return value, math.sqrt(max(variance, 0.0))


def fitted_visibility(fit: FringeFit) -> tuple[float, float]:
    """Fringe visibility amplitude/offset with first-order uncertainty, clamped to [0, 1]."""
    if not fit.offset > 0.0:
        raise DomainError(f"visibility needs a positive fringe offset, got {fit.offset}")
    a, p, q = fit.offset, fit.p, fit.q
    b = fit.amplitude
    visibility = b / a
    if b > 0.0:
        grad = np.array([-b / a**2, p / (a * b), q / (a * b)])
    else:
        grad = np.array([0.0, 1.0 / a, 1.0 / a])
    sigma = math.sqrt(max(float(grad @ fit.covariance @ grad), 0.0))
    if visibility > 1.0:
        warnings.warn(
            f"fitted visibility {visibility:.4f} exceeds 1; clamping to the physical bound",
            RuntimeWarning,
            stacklevel=2,
        )
        visibility = 1.0
    return visibility, sigma

"""Invert the six chi = 0 intensities into the complex weak value and the path state.

The inversion uses the exact arbitrary-strength relations

    Re = (1/2) cot(alpha/2) (Iy+ - Iy-) / Ix+
    Im = (1/2) cot(alpha/2) (Iz+ - Iz-) / Ix+
    |w| =       cot(alpha/2) sqrt(Ix- / Ix+)

which hold for every coupling strength alpha, so weak (15 deg) and strong
(90 deg) data are treated identically. Under noise the reconstruction uses
re + i*im; the independently measured modulus is carried as a cross-check.
Uncertainties propagate to first order with analytic Jacobians, treating the
six intensities as independent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ContrastTooLowError,
    DegenerateStateError,
    DomainError,
    NormalizationVanishesError,
    StrengthOutOfRangeError,
)
from .protocol import IntensitySet, projector_weak_values
from .qcore import wrap_angle

#: Below this coupling strength the cot(alpha/2) prefactor makes the
#: estimator variance explode; the experiment never operates there.
ALPHA_MIN_DEFAULT = math.radians(1.0)

#: Contrast below which the 1/c_hat correction is numerically unstable.
CONTRAST_MIN = 0.1


@dataclass(frozen=True)
class WeakValue:
    """Measured complex weak value: re + i*im plus the independent modulus channel."""

    re: float
    im: float
    modulus: float
    sigma_re: float = 0.0
    sigma_im: float = 0.0
    sigma_modulus: float = 0.0

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class PathStateEstimate:
    """Reconstructed path state: normalization nu, weight theta_m, phase phi_m.

    c_plus and c_minus are the unit-norm amplitudes with the global phase fixed
    so that c_plus is real and non-negative; phi_m = arg(c_minus) - arg(c_plus)
    in (-pi, pi], matching the preselected-state parametrization
    cos(theta/2)|+> + e^{i phi} sin(theta/2)|->.
    """

    nu: float
    theta_m: float
    phi_m: float
    c_plus: complex
    c_minus: complex
    sigma_nu: float = 0.0
    sigma_theta: float = 0.0
    sigma_phi: float = 0.0


def _cot_half(alpha: float) -> float:
    return 1.0 / math.tan(0.5 * alpha)


def _check_alpha(alpha: float, alpha_min: float) -> None:
    if not alpha_min < alpha <= math.pi:
        raise StrengthOutOfRangeError(
            f"alpha = {alpha:.6f} rad outside the invertible range ({alpha_min:.6f}, pi]"
        )


def extract_weak_value(
    i: IntensitySet, alpha: float, alpha_min: float = ALPHA_MIN_DEFAULT
) -> WeakValue:
    """Apply the exact extraction relations; uncertainties are filled by propagate_errors."""
    if i.ix_plus <= 0.0:
        raise NormalizationVanishesError(f"normalizing intensity Ix+ = {i.ix_plus} <= 0")
    _check_alpha(alpha, alpha_min)
    k = 0.5 * _cot_half(alpha)
    return WeakValue(
        re=k * (i.iy_plus - i.iy_minus) / i.ix_plus,
        im=k * (i.iz_plus - i.iz_minus) / i.ix_plus,
        modulus=2.0 * k * math.sqrt(max(i.ix_minus, 0.0) / i.ix_plus),
    )


def contrast_correct(
    i: IntensitySet, c_hat: float, offsets: IntensitySet | None = None
) -> IntensitySet:
    """Rescale the oscillatory component of each intensity by 1/c_hat.

    offsets are the non-oscillatory (fringe-offset) parts of the six
    intensities; the fit module provides them, making the correction the exact
    inverse of the visibility model: I' = offset + (I - offset)/c_hat. When
    offsets are not available the conjugate-pair means stand in for them,
    which is exact at alpha = 90 deg where the pair sums carry no fringe.
    """
    if not 0.0 < c_hat <= 1.0:
        raise DomainError(f"contrast estimate must lie in (0, 1], got {c_hat}")
    if c_hat < CONTRAST_MIN:
        raise ContrastTooLowError(
            f"contrast estimate {c_hat:.4f} < {CONTRAST_MIN}; correction unstable"
        )
    if c_hat == 1.0:
        return i
    if offsets is None:
        sx, sy, sz = (0.5 * s for s in i.pair_sums())
        offsets = IntensitySet(sx, sx, sy, sy, sz, sz)
    values = i.as_dict()
    offs = offsets.as_dict()
    return IntensitySet.from_dict(
        {d: offs[d] + (values[d] - offs[d]) / c_hat for d in values}
    )


def reconstruct_state(wv: WeakValue) -> PathStateEstimate:
    """Direct state characterization from the projector weak values (1 +- w)/2."""
    pi_plus, pi_minus = projector_weak_values(wv.value)
    norm_sq = abs(pi_plus) ** 2 + abs(pi_minus) ** 2
    if abs(pi_plus) < 1e-12 and abs(pi_minus) < 1e-12:
        raise DegenerateStateError("both projector weak values vanish")
    nu = 1.0 / math.sqrt(norm_sq)
    c_plus = nu * pi_plus
    c_minus = nu * pi_minus
    theta_m = math.acos(min(1.0, max(-1.0, abs(c_plus) ** 2 - abs(c_minus) ** 2)))
    phi_m = wrap_angle(cmath.phase(c_minus) - cmath.phase(c_plus))
    if abs(c_plus) > 0.0:
        rotation = cmath.exp(-1j * cmath.phase(c_plus))
        c_plus, c_minus = c_plus * rotation, c_minus * rotation
    return PathStateEstimate(nu=nu, theta_m=theta_m, phi_m=phi_m, c_plus=c_plus, c_minus=c_minus)


def _weak_value_jacobian(i: IntensitySet, alpha: float) -> np.ndarray:
    """d(re, im, modulus)/d(six intensities), intensity order as DIRECTIONS."""
    k = 0.5 * _cot_half(alpha)
    n = i.ix_plus
    re = k * (i.iy_plus - i.iy_minus) / n
    im = k * (i.iz_plus - i.iz_minus) / n
    modulus = 2.0 * k * math.sqrt(max(i.ix_minus, 0.0) / n)
    # Floor keeps the sqrt gradient finite at the dark point Ix- -> 0; there
    # the linearization overstates sigma_modulus rather than dividing by zero.
    ix_minus_eff = max(i.ix_minus, 1e-12 * n)
    jac = np.zeros((3, 6))
    jac[0, 0] = -re / n
    jac[0, 2] = k / n
    jac[0, 3] = -k / n
    jac[1, 0] = -im / n
    jac[1, 4] = k / n
    jac[1, 5] = -k / n
    jac[2, 0] = -modulus / (2.0 * n)
    jac[2, 1] = k / math.sqrt(ix_minus_eff * n)
    return jac


def _state_jacobian(re: float, im: float) -> np.ndarray:
    """d(nu, theta_m, phi_m)/d(re, im) of the reconstruction map."""
    s = 1.0 + re**2 + im**2
    nu = math.sqrt(2.0 / s)
    g = 2.0 * re / s
    dg_dre = 2.0 * (1.0 - re**2 + im**2) / s**2
    dg_dim = -4.0 * re * im / s**2
    dacos = -1.0 / math.sqrt(max(1.0 - g**2, 1e-30))
    r1_sq = (1.0 - re) ** 2 + im**2
    r2_sq = (1.0 + re) ** 2 + im**2
    return np.array(
        [
            [-nu * re / s, -nu * im / s],
            [dacos * dg_dre, dacos * dg_dim],
            [im * (1.0 / r2_sq - 1.0 / r1_sq), -(1.0 - re) / r1_sq - (1.0 + re) / r2_sq],
        ]
    )


def propagate_errors(
    intensities: IntensitySet,
    sigmas: IntensitySet,
    alpha: float,
    alpha_min: float = ALPHA_MIN_DEFAULT,
) -> tuple[WeakValue, PathStateEstimate]:
    """First-order propagation through the extraction and reconstruction maps.

    sigmas holds the standard deviations of the six intensities (same units as
    the intensities, all >= 0), treated as independent: they come from six
    separately counted scans.
    """
    wv = extract_weak_value(intensities, alpha, alpha_min)
    state = reconstruct_state(wv)

    sigma_vec = sigmas.as_array()
    if np.any(sigma_vec < 0.0):
        raise DomainError("intensity sigmas must be non-negative")

    jac_wv = _weak_value_jacobian(intensities, alpha)
    wv_sigmas = np.sqrt((jac_wv**2) @ sigma_vec**2)
    jac_state = _state_jacobian(wv.re, wv.im) @ jac_wv[:2]
    state_sigmas = np.sqrt((jac_state**2) @ sigma_vec**2)

    wv = replace(wv, sigma_re=wv_sigmas[0], sigma_im=wv_sigmas[1], sigma_modulus=wv_sigmas[2])
    state = replace(
        state, sigma_nu=state_sigmas[0], sigma_theta=state_sigmas[1], sigma_phi=state_sigmas[2]
    )
    return wv, state


@dataclass(frozen=True)
class PointEstimate:
    """Extraction record for one preselected phase: the per-(phi, regime) JSON unit."""

    phi: float
    alpha: float
    weak_value: WeakValue
    state: PathStateEstimate
    contrast: float
    contrast_sigma: float
    regime_label: str = ""


def estimate_to_dict(estimate: PointEstimate) -> dict:
    wv, st = estimate.weak_value, estimate.state
    return {
        "phi_rad": estimate.phi,
        "alpha_rad": estimate.alpha,
        "regime_label": estimate.regime_label,
        "contrast": {"c_hat": estimate.contrast, "sigma": estimate.contrast_sigma},
        "weak_value": {
            "re": wv.re,
            "im": wv.im,
            "modulus": wv.modulus,
            "sigma_re": wv.sigma_re,
            "sigma_im": wv.sigma_im,
            "sigma_modulus": wv.sigma_modulus,
        },
        "state": {
            "nu": st.nu,
            "theta_rad": st.theta_m,
            "phi_rad": st.phi_m,
            "sigma_nu": st.sigma_nu,
            "sigma_theta": st.sigma_theta,
            "sigma_phi": st.sigma_phi,
            "c_plus": [st.c_plus.real, st.c_plus.imag],
            "c_minus": [st.c_minus.real, st.c_minus.imag],
        },
    }


def estimate_from_dict(data: dict) -> PointEstimate:
    wv = data["weak_value"]
    st = data["state"]
    return PointEstimate(
        phi=data["phi_rad"],
        alpha=data["alpha_rad"],
        regime_label=data.get("regime_label", ""),
        contrast=data["contrast"]["c_hat"],
        contrast_sigma=data["contrast"]["sigma"],
        weak_value=WeakValue(
            re=wv["re"],
            im=wv["im"],
            modulus=wv["modulus"],
            sigma_re=wv["sigma_re"],
            sigma_im=wv["sigma_im"],
            sigma_modulus=wv["sigma_modulus"],
        ),
        state=PathStateEstimate(
            nu=st["nu"],
            theta_m=st["theta_rad"],
            phi_m=st["phi_rad"],
            sigma_nu=st["sigma_nu"],
            sigma_theta=st["sigma_theta"],
            sigma_phi=st["sigma_phi"],
            c_plus=complex(*st["c_plus"]),
            c_minus=complex(*st["c_minus"]),
        ),
    )

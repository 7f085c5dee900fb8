"""Analytic ground truth for the arbitrary-strength weak-value protocol.

The chain is: prepare the path state (theta, phi) with the meter along +x,
couple path and spin with strength alpha, postselect the path on |P_x;+>, and
read out the meter along the six spin directions. This module provides the
weak-value oracle, the exact noiseless intensity pipeline, closed-form fringe
formulas for the balanced (theta = pi/2) interferometer, and the mapping from
coil field to coupling strength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qcore
from .errors import DomainError, SingularPostselectionError
from .qcore import DIRECTIONS, TwoLevelState, wrap_angle

#: Overlap magnitude below which the weak value is treated as singular.
EPS_OVERLAP_DEFAULT = 1e-9

#: Neutron magnetic moment (J/T) and reduced Planck constant (J s),
#: CODATA values; the source experiment does not tabulate them.
NEUTRON_MAGNETIC_MOMENT = -9.6623651e-27
HBAR = 1.054571817e-34


@dataclass(frozen=True)
class IntensitySet:
    """The six chi = 0 intensities, one per spin-analysis direction.

    Values are probabilities when produced by the noiseless pipeline. The
    extraction formulas are scale invariant, so fitted count rates may be
    used directly. For any coherent model the three conjugate-pair sums are
    equal and give the postselection probability of the evolved state.
    """

    ix_plus: float
    ix_minus: float
    iy_plus: float
    iy_minus: float
    iz_plus: float
    iz_minus: float

    _FIELD_BY_DIRECTION = {
        "x+": "ix_plus",
        "x-": "ix_minus",
        "y+": "iy_plus",
        "y-": "iy_minus",
        "z+": "iz_plus",
        "z-": "iz_minus",
    }

    @classmethod
    def from_dict(cls, values: dict) -> "IntensitySet":
        return cls(**{cls._FIELD_BY_DIRECTION[d]: float(values[d]) for d in DIRECTIONS})

    def as_dict(self) -> dict:
        return {d: getattr(self, f) for d, f in self._FIELD_BY_DIRECTION.items()}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, self._FIELD_BY_DIRECTION[d]) for d in DIRECTIONS])

    def pair_sums(self) -> tuple[float, float, float]:
        return (
            self.ix_plus + self.ix_minus,
            self.iy_plus + self.iy_minus,
            self.iz_plus + self.iz_minus,
        )


@dataclass(frozen=True)
class FieldParams:
    """Coil field, transit time and particle constants behind the strength alpha."""

    b_z: float  # tesla
    tau: float  # seconds
    mu: float = NEUTRON_MAGNETIC_MOMENT  # J/T
    hbar: float = HBAR  # J s

    def __post_init__(self) -> None:
        if not self.tau > 0.0:
            raise DomainError(f"transit time tau must be positive, got {self.tau}")


def weak_value_sigma_z(
    p_initial: TwoLevelState,
    p_final: TwoLevelState,
    eps_overlap: float = EPS_OVERLAP_DEFAULT,
) -> complex:
    """Weak value <P_f| sigma_z |P_i> / <P_f|P_i> of the path Pauli operator."""
    overlap = qcore.braket(p_final, p_initial)
    if abs(overlap) <= eps_overlap:
        raise SingularPostselectionError(
            f"|<P_f|P_i>| = {abs(overlap):.3e} <= {eps_overlap:.3e}; weak value undefined"
        )
    flipped = TwoLevelState(p_initial.c_plus, -p_initial.c_minus)
    return qcore.braket(p_final, flipped) / overlap


def projector_weak_values(sigma_wv: complex) -> tuple[complex, complex]:
    """Weak values of the path projectors, (1 +- <sigma_z>_w)/2; they sum to 1.

    The minus projector is built as the complement of the plus one, so the
    imaginary parts cancel exactly and the sum stays within one ulp of 1.
    """
    sigma_wv = complex(sigma_wv)
    plus = (1.0 + sigma_wv) / 2.0
    return plus, complex(1.0 - plus.real, -plus.imag)


def ideal_intensities(theta: float, phi: float, alpha: float) -> IntensitySet:
    """Noiseless six-direction intensities from the full two-qubit pipeline."""
    path = qcore.make_path_state(theta, phi)
    psi = qcore.tensor(qcore.make_spin_x_plus(), path)
    psi = qcore.apply(qcore.coupling_unitary(alpha), psi)
    spin = qcore.postselect_path(psi, qcore.path_x_plus())
    return IntensitySet.from_dict({d: qcore.spin_probability(spin, d) for d in DIRECTIONS})


def closed_form_fringes(phi: float, chi: float, alpha: float, contrast: float = 1.0) -> IntensitySet:
    """Closed-form fringe intensities for the balanced interferometer (theta = pi/2).

    The phase shifter adds chi to the preselected phase. The x pair carries the
    cos^2/sin^2(alpha/2) envelope, the y pair shares a fringe of visibility
    contrast*cos(alpha), and the z fringes are shifted against each other by
    exactly 2*alpha.
    """
    phase = phi + chi
    osc = contrast * math.cos(phase)
    cos_half_sq = math.cos(0.5 * alpha) ** 2
    sin_half_sq = math.sin(0.5 * alpha) ** 2
    return IntensitySet(
        ix_plus=cos_half_sq * (1.0 + osc) / 2.0,
        ix_minus=sin_half_sq * (1.0 - osc) / 2.0,
        iy_plus=(1.0 + contrast * math.cos(alpha) * math.cos(phase)) / 4.0,
        iy_minus=(1.0 + contrast * math.cos(alpha) * math.cos(phase)) / 4.0,
        iz_plus=(1.0 + contrast * math.cos(phase + alpha)) / 4.0,
        iz_minus=(1.0 + contrast * math.cos(phase - alpha)) / 4.0,
    )


def pipeline_fringes(
    theta: float, phi: float, chi: float, alpha: float, contrast: float = 1.0
) -> IntensitySet:
    """Fringe intensities from the exact pipeline, valid for any theta.

    The interferometer visibility multiplies only the path cross-term of each
    intensity, i.e. the part that oscillates with the phase-shifter chi; the
    incoherent single-arm contributions are unaffected.
    """
    path = qcore.make_path_state(theta, wrap_angle(phi + chi))
    psi = qcore.apply(qcore.coupling_unitary(alpha), qcore.tensor(qcore.make_spin_x_plus(), path))
    a = psi.amps
    values = {}
    for d in DIRECTIONS:
        e = qcore.spin_basis_state(d)
        m_plus = e.c_plus.conjugate() * a[0] + e.c_minus.conjugate() * a[2]
        m_minus = e.c_plus.conjugate() * a[1] + e.c_minus.conjugate() * a[3]
        cross = (m_plus.conjugate() * m_minus).real
        values[d] = 0.5 * (abs(m_plus) ** 2 + abs(m_minus) ** 2 + 2.0 * contrast * cross)
    return IntensitySet.from_dict(values)


def alpha_from_field(fp: FieldParams) -> float:
    """Rotation angle alpha = -2 mu B_z tau / hbar, wrapped to (-pi, pi]."""
    return wrap_angle(-2.0 * fp.mu * fp.b_z * fp.tau / fp.hbar)


def postselection_probability(theta: float, phi: float) -> float:
    """|<P_x;+|P_i>|^2 of the bare path states; cos^2(phi/2) at theta = pi/2."""
    overlap = qcore.braket(qcore.path_x_plus(), qcore.make_path_state(theta, phi))
    return abs(overlap) ** 2


def normalization_factor(theta: float, phi: float) -> float:
    """Theory value of the reconstruction normalization nu = sqrt(1 + sin(theta) cos(phi)).

    Equals sqrt(2 * postselection_probability); the factor connecting the
    projector weak values to unit-norm amplitudes.
    """
    return math.sqrt(max(1.0 + math.sin(theta) * math.cos(phi), 0.0))

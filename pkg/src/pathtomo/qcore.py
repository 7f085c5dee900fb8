"""Exact two-qubit algebra for the spin-meter / path system.

Everything lives in the z-eigenbases of both subsystems. Composite amplitudes
are ordered (spin, path): (s+,p+), (s+,p-), (s-,p+), (s-,p-). All operations
are pure functions on immutable values, so concurrent use is safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: The six spin-analysis directions, in canonical order.
DIRECTIONS = ("x+", "x-", "y+", "y-", "z+", "z-")

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class TwoLevelState:
    """Amplitude pair of one two-level system in its z-basis.

    Constructors return normalized states; path postselection hands back
    sub-normalized pairs whose squared norm is the postselection probability.
    The zero vector is a valid value.
    """

    c_plus: complex
    c_minus: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "c_plus", complex(self.c_plus))
        object.__setattr__(self, "c_minus", complex(self.c_minus))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_plus, self.c_minus], dtype=complex)

    @property
    def norm_sq(self) -> float:
        return abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2


@dataclass(frozen=True)
class CompositeState:
    """Four spin(x)path amplitudes, ordered (s+,p+), (s+,p-), (s-,p+), (s-,p-)."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (4,):
            raise DomainError(f"composite state needs 4 amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass(frozen=True)
class Operator4:
    """Dense 4x4 operator on the composite system, same basis ordering.

    An operator flagged unitary is checked entrywise against U^dag U = 1
    at 1e-12 on construction.
    """

    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise DomainError(f"operator must be 4x4, got shape {matrix.shape}")
        if self.unitary:
            gram = matrix.conj().T @ matrix
            if not np.allclose(gram, np.eye(4), rtol=0.0, atol=1e-12):
                raise DomainError("operator flagged unitary fails U^dag U = 1 at 1e-12")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)


def braket(bra: TwoLevelState, ket: TwoLevelState) -> complex:
    """<bra|ket> in the shared z-basis."""
    return bra.c_plus.conjugate() * ket.c_plus + bra.c_minus.conjugate() * ket.c_minus


def make_path_state(theta: float, phi: float) -> TwoLevelState:
    """Preselected path state cos(theta/2)|P_z;+> + e^{i phi} sin(theta/2)|P_z;->.

    theta in [0, pi] weights the two arms; phi is wrapped to (-pi, pi].
    """
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise DomainError(f"theta/phi must be finite, got ({theta}, {phi})")
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    phi = wrap_angle(phi)
    return TwoLevelState(math.cos(0.5 * theta), cmath.exp(1j * phi) * math.sin(0.5 * theta))


def make_spin_x_plus() -> TwoLevelState:
    """Initial meter state |S_x;+> = (|S_z;+> + |S_z;->)/sqrt(2)."""
    return TwoLevelState(_INV_SQRT2, _INV_SQRT2)


def path_x_plus() -> TwoLevelState:
    """Postselection target |P_x;+> = (|P_z;+> + |P_z;->)/sqrt(2)."""
    return TwoLevelState(_INV_SQRT2, _INV_SQRT2)


_SPIN_BASIS = {
    "x+": TwoLevelState(_INV_SQRT2, _INV_SQRT2),
    "x-": TwoLevelState(_INV_SQRT2, -_INV_SQRT2),
    "y+": TwoLevelState(_INV_SQRT2, 1j * _INV_SQRT2),
    "y-": TwoLevelState(_INV_SQRT2, -1j * _INV_SQRT2),
    "z+": TwoLevelState(1.0, 0.0),
    "z-": TwoLevelState(0.0, 1.0),
}


def spin_basis_state(direction: str) -> TwoLevelState:
    """Eigenstate |S_j;+-> for one of the six analysis directions."""
    try:
        return _SPIN_BASIS[direction]
    except KeyError:
        raise DomainError(f"unknown spin direction {direction!r}, expected one of {DIRECTIONS}") from None


def tensor(spin: TwoLevelState, path: TwoLevelState) -> CompositeState:
    """Product state spin(x)path in the composite amplitude ordering."""
    return CompositeState(np.kron(spin.vector, path.vector))


_SIGMA_ZZ_DIAG = np.array([1.0, -1.0, -1.0, 1.0])


def coupling_unitary(alpha: float) -> Operator4:
    """Path-conditioned spin rotation exp(-i alpha sigma_z sigma_z / 2).

    Built from the exact identity cos(alpha/2) 1 - i sin(alpha/2) sigma_z(x)sigma_z,
    which holds for every alpha; the result is diagonal with entries
    e^{-+ i alpha/2} per joint z-parity.
    """
    half = 0.5 * alpha
    diagonal = math.cos(half) - 1j * math.sin(half) * _SIGMA_ZZ_DIAG
    return Operator4(np.diag(diagonal), unitary=True)


def apply(op: Operator4, state: CompositeState) -> CompositeState:
    """Matrix-vector action of a composite operator; norm-preserving if unitary."""
    return CompositeState(op.matrix @ state.amps)


def postselect_path(state: CompositeState, path_final: TwoLevelState) -> TwoLevelState:
    """Project the path onto |P_f>; returns the sub-normalized spin pair <P_f|psi>.

    The squared norm of the result is the postselection probability. A zero
    vector (orthogonal postselection) is a valid outcome, not an error.
    """
    f_plus = path_final.c_plus.conjugate()
    f_minus = path_final.c_minus.conjugate()
    a = state.amps
    return TwoLevelState(f_plus * a[0] + f_minus * a[1], f_plus * a[2] + f_minus * a[3])


def spin_probability(spin: TwoLevelState, direction: str) -> float:
    """|<S_j;+-|spin>|^2 for a (possibly sub-normalized) spin pair."""
    return abs(braket(spin_basis_state(direction), spin)) ** 2

"""Two-photon polarization algebra.

Exact state-vector algebra for two polarization qubits: Bell states, local
and collective unitaries, exchange (photon-swap) symmetry, wave plates and
analyzer projections.  Amplitudes are complex 4-vectors over the product
basis, ordered (HH, HV, VH, VV); the first letter is photon 1.

States carry no global-phase convention.  Compare states with
:func:`fidelity`, never componentwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BASIS_LABELS",
    "PolBasis",
    "BellState",
    "TwoPhotonPolState",
    "bell_state",
    "apply_two_qubit",
    "wave_plate",
    "exchange_projections",
    "analyzer_projection",
    "fidelity",
    "swap_photons",
    "require_unitary",
    "pair_projection_amplitude",
]

BASIS_LABELS = ("HH", "HV", "VH", "VV")

# Index permutation realizing the photon-1 <-> photon-2 swap on the 4-vector.
_SWAP = np.array([0, 2, 1, 3])

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12


class PolBasis(enum.Enum):
    """Single-photon analyzer settings: H, V and the diagonal pair."""

    H = "h"
    V = "v"
    PLUS = "plus"
    MINUS = "minus"

    def vector(self) -> np.ndarray:
        """Jones vector of the setting, in the (H, V) basis."""
        if self is PolBasis.H:
            return np.array([1.0, 0.0], dtype=complex)
        if self is PolBasis.V:
            return np.array([0.0, 1.0], dtype=complex)
        s = 1.0 / np.sqrt(2.0)
        if self is PolBasis.PLUS:
            return np.array([s, s], dtype=complex)
        return np.array([s, -s], dtype=complex)


class BellState(enum.Enum):
    PSI_MINUS = "psi_minus"
    PSI_PLUS = "psi_plus"
    PHI_MINUS = "phi_minus"
    PHI_PLUS = "phi_plus"


@dataclass(frozen=True, eq=False)
class TwoPhotonPolState:
    """Normalized two-photon polarization state.

    ``amplitudes`` is a complex 4-vector over (HH, HV, VH, VV).  The squared
    norm must be 1 within 1e-12; construction rejects anything else.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(4)
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"two-photon state must be normalized: |amp|^2 = {norm2!r}"
            )
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    def swapped(self) -> "TwoPhotonPolState":
        """State with the two photons exchanged."""
        return TwoPhotonPolState(self.amplitudes[_SWAP])

    def swap_overlap(self) -> complex:
        """<state|SWAP|state>; +1 for symmetric states, -1 for the singlet."""
        return complex(np.vdot(self.amplitudes, self.amplitudes[_SWAP]))


def swap_photons(amplitudes: np.ndarray) -> np.ndarray:
    """Photon-exchange permutation applied to a raw 4-vector."""
    return np.asarray(amplitudes)[..., _SWAP]


_BELL_VECTORS = {
    BellState.PSI_MINUS: np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
    BellState.PSI_PLUS: np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    BellState.PHI_MINUS: np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    BellState.PHI_PLUS: np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
}


def bell_state(kind: BellState | str) -> TwoPhotonPolState:
    """One of the four maximally entangled Bell states.

    ``kind`` may be a :class:`BellState` or its string value, e.g.
    ``"psi_minus"``.  PSI_MINUS is the unique antisymmetric state; the other
    three (the triplet) are symmetric under photon exchange.
    """
    kind = BellState(kind)
    return TwoPhotonPolState(_BELL_VECTORS[kind].copy())


def require_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate a 2x2 matrix as unitary (U^dag U = I within ``tol``)."""
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    defect = np.abs(u.conj().T @ u - np.eye(2)).max()
    if defect > tol:
        raise ValueError(f"matrix is not unitary: max |U^dag U - I| = {defect:.3e}")
    return u


def apply_two_qubit(
    u1: np.ndarray, u2: np.ndarray, state: TwoPhotonPolState
) -> TwoPhotonPolState:
    """Apply the product unitary (u1 on photon 1) tensor (u2 on photon 2).

    With u1 == u2 this is a collective operation; the singlet is invariant
    under every such operation up to a global phase.
    """
    u1 = require_unitary(u1)
    u2 = require_unitary(u2)
    return TwoPhotonPolState(np.kron(u1, u2) @ state.amplitudes)


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def wave_plate(kind: str, fast_axis_angle: float) -> np.ndarray:
    """Jones matrix of a retarder with its fast axis at ``fast_axis_angle``.

    Parameters
    ----------
    kind : {"half", "quarter"}
        Retardance pi (half-wave) or pi/2 (quarter-wave).
    fast_axis_angle : float
        Fast-axis angle from horizontal, radians.

    Convention: at angle 0 the fast axis lies along H and the retardance
    phase is applied to the slow (V) axis, so a half-wave plate at 0 is
    diag(1, -1).
    """
    retardance = {"half": np.pi, "quarter": np.pi / 2}.get(kind)
    if retardance is None:
        raise ValueError(f"unknown wave plate kind: {kind!r}")
    plate = np.diag([1.0, np.exp(1j * retardance)])
    rot = _rotation(fast_axis_angle)
    return rot @ plate @ rot.conj().T


def exchange_projections(
    state: TwoPhotonPolState,
) -> tuple[np.ndarray, np.ndarray]:
    """Split a state into symmetric and antisymmetric parts.

    Returns the unnormalized (symmetric, antisymmetric) amplitude 4-vectors;
    they sum to the input amplitudes.  The antisymmetric part is always
    proportional to the singlet.
    """
    amp = state.amplitudes
    swapped = amp[_SWAP]
    return (amp + swapped) / 2.0, (amp - swapped) / 2.0


def pair_projection_amplitude(
    amplitudes: np.ndarray, e1: np.ndarray, e2: np.ndarray
) -> complex:
    """Amplitude <e1, e2|state> for arbitrary single-photon vectors."""
    proj = np.kron(np.asarray(e1, dtype=complex), np.asarray(e2, dtype=complex))
    return complex(np.vdot(proj, amplitudes))


def analyzer_projection(
    state: TwoPhotonPolState, setting1: PolBasis, setting2: PolBasis
) -> float:
    """Coincidence probability |<setting1, setting2|state>|^2."""
    amp = pair_projection_amplitude(
        state.amplitudes, setting1.vector(), setting2.vector()
    )
    return abs(amp) ** 2


def fidelity(a: TwoPhotonPolState, b: TwoPhotonPolState) -> float:
    """|<a|b>|^2; equals 1 iff the states agree up to a global phase."""
    return abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2

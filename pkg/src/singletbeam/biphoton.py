"""Two-photon state construction and beam-splitter transformation.

The down-converted pair inherits the pump transverse profile at the sum
coordinate: before the beam splitter the spatial amplitude of a pair
detected at transverse points p1, p2 on the detection plane is
``W((x1+x2)/2, (y1+y2)/2)``, where W is the pump field propagated to that
plane.  Dependence on the difference coordinate (phase matching) is
deliberately omitted.

The 50-50 beam splitter is symmetric, ``t = 1/sqrt(2)``, ``r = i/sqrt(2)``,
and reflection flips the y coordinate (mirror image).  Summing the direct
and exchange detection paths yields, per output-port pair, an amplitude
whose parity in y selects which polarization exchange symmetry survives:
with an odd pump only the antisymmetric (singlet) part exits into a single
port, and with an even pump only the symmetric part does.

Partial distinguishability enters the coincidence rate through a single
overlap factor and a Gaussian path-delay envelope set by the interference
filter coherence length.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .optics import FieldGrid
from .polarization import TwoPhotonPolState, swap_photons

__all__ = [
    "BiphotonState",
    "PortPair",
    "PortPairAmplitude",
    "make_biphoton",
    "two_photon_amplitude",
    "beam_splitter_transform",
    "coincidence_density",
    "delay_envelope",
    "coherence_length",
    "DEFAULT_PAIR_WAVELENGTH",
    "DEFAULT_FILTER_BANDWIDTH",
    "TRANSMISSION",
    "REFLECTION",
]

DEFAULT_PAIR_WAVELENGTH = 702e-9
DEFAULT_FILTER_BANDWIDTH = 1e-9

# Symmetric beam-splitter amplitudes.
TRANSMISSION = 1.0 / math.sqrt(2.0)
REFLECTION = 1j / math.sqrt(2.0)

_LN2_4 = 4.0 * math.log(2.0)


def coherence_length(wavelength: float, bandwidth: float) -> float:
    """Coherence length lambda^2 / d-lambda of an interference filter."""
    return wavelength**2 / bandwidth


def delay_envelope(delay: float, coherence_len: float | None = None) -> float:
    """Interference envelope g(delay) in [0, 1].

    Gaussian in the path-length difference with FWHM equal to the filter
    coherence length; g(0) = 1, even, monotone decreasing in |delay|.
    """
    if coherence_len is None:
        coherence_len = coherence_length(
            DEFAULT_PAIR_WAVELENGTH, DEFAULT_FILTER_BANDWIDTH
        )
    return float(np.exp(-_LN2_4 * (delay / coherence_len) ** 2))


@dataclass(frozen=True, eq=False)
class BiphotonState:
    """Polarization state and transferred pump kernel of one photon pair.

    Attributes
    ----------
    pol : TwoPhotonPolState
        Two-photon polarization amplitudes.
    pump : FieldGrid
        Pump transverse field evaluated at the detection plane.
    delay : float
        Signed interferometer path-length difference, meters.
    overlap : float
        Phenomenological mode-overlap factor in [0, 1] scaling the
        interference cross term (1 = fully indistinguishable).
    wavelength, filter_bandwidth : float
        Down-converted center wavelength and filter FWHM, meters; they set
        the delay-envelope coherence length.
    """

    pol: TwoPhotonPolState
    pump: FieldGrid
    delay: float = 0.0
    overlap: float = 1.0
    wavelength: float = DEFAULT_PAIR_WAVELENGTH
    filter_bandwidth: float = DEFAULT_FILTER_BANDWIDTH

    def __post_init__(self):
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(f"overlap must be in [0, 1], got {self.overlap!r}")
        if self.wavelength <= 0.0 or self.filter_bandwidth <= 0.0:
            raise ValueError("wavelength and filter bandwidth must be positive")

    @property
    def coherence_length(self) -> float:
        return coherence_length(self.wavelength, self.filter_bandwidth)

    def envelope(self, delay: float | None = None) -> float:
        d = self.delay if delay is None else delay
        return delay_envelope(d, self.coherence_length)

    def with_delay(self, delay: float) -> "BiphotonState":
        return replace(self, delay=delay)


def make_biphoton(
    pump: FieldGrid,
    pol: TwoPhotonPolState,
    delay: float = 0.0,
    overlap: float = 1.0,
    wavelength: float = DEFAULT_PAIR_WAVELENGTH,
    filter_bandwidth: float = DEFAULT_FILTER_BANDWIDTH,
) -> BiphotonState:
    """Build the two-photon state produced by ``pump`` at the detection plane."""
    return BiphotonState(
        pol=pol,
        pump=pump,
        delay=delay,
        overlap=overlap,
        wavelength=wavelength,
        filter_bandwidth=filter_bandwidth,
    )


def _sum_coordinate(
    r1: np.ndarray, r2: np.ndarray, flip1: bool, flip2: bool
) -> np.ndarray:
    """Midpoint of r1, r2 with the mirror map (x, y) -> (x, -y) optionally
    applied to either argument first.  Broadcasts over leading axes."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    x = (r1[..., 0] + r2[..., 0]) * 0.5
    y1 = -r1[..., 1] if flip1 else r1[..., 1]
    y2 = -r2[..., 1] if flip2 else r2[..., 1]
    y = (y1 + y2) * 0.5
    return np.stack([x, y], axis=-1)


def two_photon_amplitude(
    state: BiphotonState, r1: np.ndarray, r2: np.ndarray
) -> np.ndarray:
    """Pre-beam-splitter spatial amplitude W((x1+x2)/2, (y1+y2)/2).

    Evaluated by bilinear interpolation on the pump grid; 0 outside the
    window.  ``r1`` and ``r2`` are (x, y) points with shape (..., 2).
    """
    return state.pump.value_at(_sum_coordinate(r1, r2, False, False))


class PortPair(enum.Enum):
    """Output-port combination of the two detectors."""

    SAME_1 = "same_1"
    SAME_2 = "same_2"
    OPPOSITE = "opposite"


@dataclass(frozen=True, eq=False)
class PortPairAmplitude:
    """Direct and exchange two-photon amplitudes for one port combination.

    The full detection amplitude at (r1, r2) is the 4-vector
    ``direct_spatial(r1, r2) * pol_direct + exchange_spatial(r1, r2) *
    pol_exchange``; the exchange term carries the photon-swapped
    polarization state.
    """

    pair: PortPair
    state: BiphotonState
    direct_coeff: complex
    exchange_coeff: complex
    direct_flips: tuple[bool, bool]
    exchange_flips: tuple[bool, bool]
    pol_direct: np.ndarray
    pol_exchange: np.ndarray

    def direct_spatial(self, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
        mid = _sum_coordinate(r1, r2, *self.direct_flips)
        return self.direct_coeff * self.state.pump.value_at(mid)

    def exchange_spatial(self, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
        mid = _sum_coordinate(r1, r2, *self.exchange_flips)
        return self.exchange_coeff * self.state.pump.value_at(mid)

    def total_amplitude(self, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
        """Coherent direct + exchange amplitude 4-vector, shape (..., 4)."""
        sd = self.direct_spatial(r1, r2)[..., None]
        se = self.exchange_spatial(r1, r2)[..., None]
        return sd * self.pol_direct + se * self.pol_exchange


def beam_splitter_transform(state: BiphotonState) -> tuple[PortPairAmplitude, ...]:
    """Amplitude pairs for the three output-port combinations.

    For detectors D1 at r1 and D2 at r2 (both photons detected):

    * both in port 1: direct ``t r W((r1 + s r2)/2)``, exchange
      ``r t W((s r1 + r2)/2)`` with swapped polarization;
    * both in port 2: the mirror-image assignment, identical rates;
    * opposite ports: direct ``t^2 W((r1 + r2)/2)``, exchange
      ``r^2 W((s r1 + s r2)/2)`` with swapped polarization;

    where ``s`` flips y.  With an odd pump and the singlet the same-port
    sum collapses to ``i W((x1+x2)/2, (y1-y2)/2)`` times the singlet, and
    the opposite-port sum vanishes identically.
    """
    pol = state.pol.amplitudes
    pol_swapped = swap_photons(pol)
    t, r = TRANSMISSION, REFLECTION
    return (
        PortPairAmplitude(
            pair=PortPair.SAME_1,
            state=state,
            direct_coeff=t * r,
            exchange_coeff=r * t,
            direct_flips=(False, True),
            exchange_flips=(True, False),
            pol_direct=pol,
            pol_exchange=pol_swapped,
        ),
        PortPairAmplitude(
            pair=PortPair.SAME_2,
            state=state,
            direct_coeff=r * t,
            exchange_coeff=t * r,
            direct_flips=(True, False),
            exchange_flips=(False, True),
            pol_direct=pol,
            pol_exchange=pol_swapped,
        ),
        PortPairAmplitude(
            pair=PortPair.OPPOSITE,
            state=state,
            direct_coeff=t * t,
            exchange_coeff=r * r,
            direct_flips=(False, False),
            exchange_flips=(True, True),
            pol_direct=pol,
            pol_exchange=pol_swapped,
        ),
    )


def _pol_factors(
    amp: PortPairAmplitude,
    analyzer1: np.ndarray | None,
    analyzer2: np.ndarray | None,
) -> tuple[float, float, complex]:
    """(P_dd, P_ee, P_de) polarization weights of the rate quadratic form.

    With analyzers the direct/exchange amplitudes are projected onto the
    product vector; without, the polarization outcomes are summed over.
    """
    if (analyzer1 is None) != (analyzer2 is None):
        raise ValueError("provide analyzer vectors for both detectors or neither")
    if analyzer1 is None:
        p_dd = float(np.vdot(amp.pol_direct, amp.pol_direct).real)
        p_ee = float(np.vdot(amp.pol_exchange, amp.pol_exchange).real)
        p_de = complex(np.vdot(amp.pol_direct, amp.pol_exchange))
        return p_dd, p_ee, p_de
    proj = np.kron(
        np.asarray(analyzer1, dtype=complex), np.asarray(analyzer2, dtype=complex)
    )
    a_d = complex(np.vdot(proj, amp.pol_direct))
    a_e = complex(np.vdot(proj, amp.pol_exchange))
    return abs(a_d) ** 2, abs(a_e) ** 2, a_d.conjugate() * a_e


def coincidence_density(
    amp: PortPairAmplitude,
    r1: np.ndarray,
    r2: np.ndarray,
    analyzer1: np.ndarray | None = None,
    analyzer2: np.ndarray | None = None,
    delay: float | None = None,
    overlap: float | None = None,
) -> np.ndarray:
    """Coincidence rate density at detector points (r1, r2).

    rate = |D|^2 + |E|^2 + 2 * overlap * g(delay) * Re <D|E>, with D and E
    the (optionally analyzer-projected) direct and exchange amplitudes.
    Nonnegative for overlap * g <= 1.  ``delay`` and ``overlap`` default to
    the state's values.
    """
    state = amp.state
    mu = state.overlap if overlap is None else overlap
    g = state.envelope(delay)
    p_dd, p_ee, p_de = _pol_factors(amp, analyzer1, analyzer2)
    sd = amp.direct_spatial(r1, r2)
    se = amp.exchange_spatial(r1, r2)
    dd = (sd.real**2 + sd.imag**2) * p_dd
    ee = (se.real**2 + se.imag**2) * p_ee
    cross = 2.0 * mu * g * (np.conj(sd) * se * p_de).real
    return dd + ee + cross

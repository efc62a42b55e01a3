"""Finite-aperture detectors, scan drivers and visibility extraction.

Coincidence rates come from midpoint quadrature of the port-pair density
over both detector apertures.  Quadrature nodes live on a regular midpoint
lattice attached to each aperture (not to the field grid), so detector
positions can move by sub-cell amounts without staircase artifacts and the
quadrature step can be halved independently of the field resolution.

Two visibility estimators are used.  Full-oscillation curves (polarization
fringes, profiles) use the fringe contrast (max - min) / (max + min).  HOM
delay curves are referenced to their far-delay baseline,
``max |rate - baseline| / baseline``, the usual dip/peak depth quoted for
two-photon interference.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .biphoton import BiphotonState, PortPair, beam_splitter_transform
from .polarization import (
    TwoPhotonPolState,
    pair_projection_amplitude,
    swap_photons,
    wave_plate,
)

__all__ = [
    "Port",
    "Circle",
    "Slit",
    "Point",
    "Analyzer",
    "DetectorSpec",
    "ScanResult",
    "aperture_nodes",
    "coincidence_rate",
    "pair_integrals",
    "hom_scan",
    "transverse_scan",
    "polarization_correlation_scan",
    "pump_profile_singles",
    "visibility",
    "fringe_visibility",
    "interference_visibility",
    "poisson_sigma",
    "scan_to_csv",
    "DEFAULT_QUADRATURE_STEP",
]

DEFAULT_QUADRATURE_STEP = 0.075e-3

# Pairs per quadrature chunk; fixed so reduction order is deterministic.
_CHUNK = 1 << 18


class Port(enum.Enum):
    PORT_1 = "port_1"
    PORT_2 = "port_2"
    SOURCE_A = "source_a"
    SOURCE_B = "source_b"


@dataclass(frozen=True)
class Circle:
    diameter: float

    def __post_init__(self):
        if self.diameter <= 0.0:
            raise ValueError("circle diameter must be positive")


@dataclass(frozen=True)
class Slit:
    """Rectangular aperture: ``width_x`` along x, ``height_y`` along y."""

    width_x: float
    height_y: float

    def __post_init__(self):
        if self.width_x <= 0.0 or self.height_y <= 0.0:
            raise ValueError("slit dimensions must be positive")


@dataclass(frozen=True)
class Point:
    """Idealized point detector (single node, unit weight)."""


@dataclass(frozen=True)
class Analyzer:
    """Half-wave plate followed by a polarizing beam splitter output.

    ``arm`` selects the PBS output: "h" transmits horizontal, "v" reflects
    vertical.  Detection behind the analyzer projects the photon onto
    ``U_hwp |arm>`` (the HWP Jones matrix is Hermitian).
    """

    hwp_angle: float = 0.0
    arm: str = "h"

    def __post_init__(self):
        if self.arm not in ("h", "v"):
            raise ValueError(f"analyzer arm must be 'h' or 'v', got {self.arm!r}")
        if not 0.0 <= self.hwp_angle < math.pi:
            raise ValueError("hwp_angle must lie in [0, pi)")

    def projection_vector(self) -> np.ndarray:
        basis = np.array([1.0, 0.0] if self.arm == "h" else [0.0, 1.0], dtype=complex)
        u = wave_plate("half", self.hwp_angle)
        return u.conj().T @ basis


@dataclass(frozen=True)
class DetectorSpec:
    port: Port
    center: tuple[float, float] = (0.0, 0.0)
    aperture: Circle | Slit | Point = Point()
    analyzer: Analyzer | None = None

    def moved_to(self, center: tuple[float, float]) -> "DetectorSpec":
        return replace(self, center=center)


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Sampled coincidence curve with Poisson errors and a visibility.

    ``abscissa`` is delay or detector position in mm, or analyzer angle in
    degrees.  ``baseline`` is the far-delay rate for HOM scans, None
    otherwise.
    """

    abscissa: np.ndarray
    rates: np.ndarray
    sigmas: np.ndarray
    visibility: float
    baseline: float | None = None


def aperture_nodes(
    aperture: Circle | Slit | Point,
    center: tuple[float, float],
    step: float = DEFAULT_QUADRATURE_STEP,
) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint quadrature nodes and weights covering an aperture.

    Nodes form a regular lattice of pitch <= ``step`` (at least 4 cells per
    axis) clipped to the aperture; weights are the cell areas.  Returns
    (points (n, 2), weights (n,)).
    """
    cx, cy = center
    if isinstance(aperture, Point):
        return np.array([[cx, cy]], dtype=float), np.array([1.0])
    if isinstance(aperture, Circle):
        ex = ey = aperture.diameter
    else:
        ex, ey = aperture.width_x, aperture.height_y
    nx = max(4, math.ceil(ex / step))
    ny = max(4, math.ceil(ey / step))
    hx, hy = ex / nx, ey / ny
    xs = cx + (np.arange(nx) - (nx - 1) / 2.0) * hx
    ys = cy + (np.arange(ny) - (ny - 1) / 2.0) * hy
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    if isinstance(aperture, Circle):
        keep = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 <= (
            aperture.diameter / 2.0
        ) ** 2
        pts = pts[keep]
    weights = np.full(len(pts), hx * hy)
    return pts, weights


def _port_pair_for(d1: DetectorSpec, d2: DetectorSpec) -> PortPair:
    ports = (d1.port, d2.port)
    for p in ports:
        if p not in (Port.PORT_1, Port.PORT_2):
            raise ValueError(
                "coincidence_rate requires detectors on beam-splitter output "
                f"ports, got {p}"
            )
    if ports == (Port.PORT_1, Port.PORT_1):
        return PortPair.SAME_1
    if ports == (Port.PORT_2, Port.PORT_2):
        return PortPair.SAME_2
    return PortPair.OPPOSITE


def _bounding_box(d: DetectorSpec) -> tuple[float, float, float, float]:
    cx, cy = d.center
    a = d.aperture
    if isinstance(a, Point):
        return cx, cx, cy, cy
    if isinstance(a, Circle):
        r = a.diameter / 2.0
        return cx - r, cx + r, cy - r, cy + r
    return (
        cx - a.width_x / 2.0,
        cx + a.width_x / 2.0,
        cy - a.height_y / 2.0,
        cy + a.height_y / 2.0,
    )


def _warn_if_ambiguous(d1: DetectorSpec, d2: DetectorSpec, pair: PortPair) -> None:
    if pair is PortPair.OPPOSITE:
        return
    if d1.analyzer is not None or d2.analyzer is not None:
        return
    ax0, ax1, ay0, ay1 = _bounding_box(d1)
    bx0, bx1, by0, by1 = _bounding_box(d2)
    if ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1:
        warnings.warn(
            "same-port detectors overlap without analyzers; a single photon "
            "pair can double-click, rate computed anyway",
            stacklevel=3,
        )


@dataclass(frozen=True)
class PairIntegrals:
    """Aperture-integrated pieces of the rate quadratic form.

    rate(delay) = s_dd * p_dd + s_ee * p_ee
                  + 2 * overlap * g(delay) * Re(s_de * p_de)
    """

    s_dd: float
    s_ee: float
    s_de: complex
    p_dd: float
    p_ee: float
    p_de: complex

    def rate(self, mu_g: float) -> float:
        base = self.s_dd * self.p_dd + self.s_ee * self.p_ee
        cross = 2.0 * mu_g * (self.s_de * self.p_de).real
        return base + cross

    @property
    def baseline(self) -> float:
        return self.rate(0.0)


def pair_integrals(
    state: BiphotonState,
    d1: DetectorSpec,
    d2: DetectorSpec,
    quadrature_step: float = DEFAULT_QUADRATURE_STEP,
) -> PairIntegrals:
    """Quadrature of the direct/exchange amplitudes over both apertures.

    The spatial sums are delay-independent, so a delay scan reuses one
    evaluation.  Chunked accumulation keeps memory bounded and the
    reduction order fixed.
    """
    pair = _port_pair_for(d1, d2)
    _warn_if_ambiguous(d1, d2, pair)
    amp = next(a for a in beam_splitter_transform(state) if a.pair is pair)

    pts1, w1 = aperture_nodes(d1.aperture, d1.center, quadrature_step)
    pts2, w2 = aperture_nodes(d2.aperture, d2.center, quadrature_step)

    s_dd = 0.0
    s_ee = 0.0
    s_de = 0.0 + 0.0j
    rows = max(1, _CHUNK // max(1, len(pts2)))
    for start in range(0, len(pts1), rows):
        p1 = pts1[start : start + rows, None, :]
        wblock = w1[start : start + rows, None] * w2[None, :]
        sd = amp.direct_spatial(p1, pts2[None, :, :])
        se = amp.exchange_spatial(p1, pts2[None, :, :])
        s_dd += float(np.sum(wblock * (sd.real**2 + sd.imag**2)))
        s_ee += float(np.sum(wblock * (se.real**2 + se.imag**2)))
        s_de += complex(np.sum(wblock * np.conj(sd) * se))

    e1 = d1.analyzer.projection_vector() if d1.analyzer is not None else None
    e2 = d2.analyzer.projection_vector() if d2.analyzer is not None else None
    if (e1 is None) != (e2 is None):
        raise ValueError("both detectors need analyzers, or neither")
    if e1 is None:
        pol_d = amp.pol_direct
        pol_e = amp.pol_exchange
        p_dd = float(np.vdot(pol_d, pol_d).real)
        p_ee = float(np.vdot(pol_e, pol_e).real)
        p_de = complex(np.vdot(pol_d, pol_e))
    else:
        a_d = pair_projection_amplitude(amp.pol_direct, e1, e2)
        a_e = pair_projection_amplitude(amp.pol_exchange, e1, e2)
        p_dd, p_ee, p_de = abs(a_d) ** 2, abs(a_e) ** 2, a_d.conjugate() * a_e

    return PairIntegrals(s_dd, s_ee, s_de, p_dd, p_ee, p_de)


def coincidence_rate(
    state: BiphotonState,
    d1: DetectorSpec,
    d2: DetectorSpec,
    quadrature_step: float = DEFAULT_QUADRATURE_STEP,
) -> float:
    """Expected coincidence rate for two detectors (delay from the state)."""
    integ = pair_integrals(state, d1, d2, quadrature_step)
    return integ.rate(state.overlap * state.envelope())


def poisson_sigma(rates: np.ndarray, exposure: float) -> np.ndarray:
    """Poisson standard deviation of each rate for ``exposure`` counts per
    unit rate, expressed in rate units (sqrt(rate / exposure))."""
    return np.sqrt(np.maximum(np.asarray(rates, dtype=float), 0.0) / exposure)


def fringe_visibility(rates: np.ndarray) -> float:
    """(max - min) / (max + min); 0 for an all-zero or constant curve."""
    rates = np.asarray(rates, dtype=float)
    hi = float(rates.max())
    lo = float(rates.min())
    if hi + lo == 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


def interference_visibility(rates: np.ndarray, baseline: float) -> float:
    """Depth of an interference feature relative to its baseline.

    max |rate - baseline| / baseline; 0 when the baseline vanishes.  Equals
    the overlap factor for both dips and peaks of the rate model.
    """
    if baseline <= 0.0:
        return 0.0
    rates = np.asarray(rates, dtype=float)
    return float(np.max(np.abs(rates - baseline))) / baseline


# Generic estimator of the ScanResult contract.
visibility = fringe_visibility


def hom_scan(
    state: BiphotonState,
    d1: DetectorSpec,
    d2: DetectorSpec,
    delays: np.ndarray,
    exposure: float = 1.0,
    quadrature_step: float = DEFAULT_QUADRATURE_STEP,
) -> ScanResult:
    """Coincidence rate versus interferometer path-length difference.

    ``delays`` must hold at least 3 points and span at least +/-3 envelope
    FWHMs so the far-delay baseline is sampled.  The reported visibility is
    referenced to the exact zero-envelope baseline.
    """
    delays = np.asarray(delays, dtype=float)
    if delays.size < 3:
        raise ValueError("delay scan needs at least 3 steps")
    span = 3.0 * state.coherence_length
    if delays.min() > -span or delays.max() < span:
        raise ValueError(
            "degenerate delay range: scan must span at least +/-3 envelope "
            f"widths (+/-{span:.4e} m)"
        )
    integ = pair_integrals(state, d1, d2, quadrature_step)
    mu = state.overlap
    rates = np.array([integ.rate(mu * state.envelope(d)) for d in delays])
    vis = interference_visibility(rates, integ.baseline)
    return ScanResult(
        abscissa=delays * 1e3,
        rates=rates,
        sigmas=poisson_sigma(rates, exposure),
        visibility=vis,
        baseline=integ.baseline,
    )


class TransverseMode(enum.Enum):
    FIX_D1_SCAN_D2 = "fix_d1_scan_d2"
    SCAN_TOGETHER = "scan_together"


def transverse_scan(
    state: BiphotonState,
    mode: TransverseMode | str,
    offsets: np.ndarray,
    d1: DetectorSpec,
    d2: DetectorSpec,
    exposure: float = 1.0,
    quadrature_step: float = DEFAULT_QUADRATURE_STEP,
) -> ScanResult:
    """Coincidence rate versus detector y position on one output port.

    FIX_D1_SCAN_D2 moves only d2's center to each y offset; SCAN_TOGETHER
    moves both identically.  Both detectors must carry slit (or point)
    apertures on the same output port; the state's delay is used as-is
    (set it to the interference maximum beforehand).
    """
    mode = TransverseMode(mode)
    if d1.port is not d2.port:
        raise ValueError("transverse scans require both detectors on one port")
    for d in (d1, d2):
        if isinstance(d.aperture, Circle):
            raise ValueError("transverse scans require slit or point apertures")
    offsets = np.asarray(offsets, dtype=float)
    mu_g = state.overlap * state.envelope()
    rates = np.empty(offsets.size)
    for i, dy in enumerate(offsets):
        if mode is TransverseMode.SCAN_TOGETHER:
            a = d1.moved_to((d1.center[0], d1.center[1] + dy))
        else:
            a = d1
        b = d2.moved_to((d2.center[0], d2.center[1] + dy))
        rates[i] = pair_integrals(state, a, b, quadrature_step).rate(mu_g)
    return ScanResult(
        abscissa=offsets * 1e3,
        rates=rates,
        sigmas=poisson_sigma(rates, exposure),
        visibility=fringe_visibility(rates),
    )


def pump_profile_singles(
    state: BiphotonState,
    detector: DetectorSpec,
    offsets: np.ndarray,
    exposure: float = 1.0,
    quadrature_step: float = DEFAULT_QUADRATURE_STEP,
) -> ScanResult:
    """Aperture-integrated pump intensity versus detector y position.

    Display-only proxy for single-detector count profiles (the shape the
    beam photograph shows); the sum-coordinate kernel itself carries no
    single-photon localization.
    """
    offsets = np.asarray(offsets, dtype=float)
    rates = np.empty(offsets.size)
    for i, dy in enumerate(offsets):
        pts, w = aperture_nodes(
            detector.aperture,
            (detector.center[0], detector.center[1] + dy),
            quadrature_step,
        )
        vals = state.pump.value_at(pts)
        rates[i] = float(np.sum(w * (vals.real**2 + vals.imag**2)))
    return ScanResult(
        abscissa=offsets * 1e3,
        rates=rates,
        sigmas=poisson_sigma(rates, exposure),
        visibility=fringe_visibility(rates),
    )


def _linear_polarizer(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)], dtype=complex)


def _pair_probability(pol: TwoPhotonPolState, theta1: float, theta2: float) -> float:
    amp = pair_projection_amplitude(
        pol.amplitudes, _linear_polarizer(theta1), _linear_polarizer(theta2)
    )
    return abs(amp) ** 2


def polarization_correlation_scan(
    pol: TwoPhotonPolState,
    fixed_angle_deg: float,
    rotating_deg: np.ndarray,
    overlap: float = 1.0,
    exposure: float = 1.0,
) -> ScanResult:
    """Coincidence fringe with one polarizer fixed and the other rotated.

    Beam splitter absent: each source arm feeds one detector through a
    polarizer.  The fringe (oscillating) component of the ideal curve is
    scaled by ``overlap`` about its angular mean, so the reported fringe
    visibility equals ``overlap`` for a Bell state.
    """
    if not 0.0 <= overlap <= 1.0:
        raise ValueError("overlap must be in [0, 1]")
    rotating_deg = np.asarray(rotating_deg, dtype=float)
    if rotating_deg.size == 0:
        raise ValueError("empty rotating-angle range")
    t1 = math.radians(fixed_angle_deg)
    rates = np.empty(rotating_deg.size)
    for i, deg in enumerate(rotating_deg):
        t2 = math.radians(deg)
        ideal = _pair_probability(pol, t1, t2)
        # The ideal curve is a pure second-harmonic fringe in t2, so its
        # angular mean is the two-point average a quarter period apart.
        mean = 0.5 * (ideal + _pair_probability(pol, t1, t2 + math.pi / 2.0))
        rates[i] = mean + overlap * (ideal - mean)
    return ScanResult(
        abscissa=rotating_deg,
        rates=rates,
        sigmas=poisson_sigma(rates, exposure),
        visibility=fringe_visibility(rates),
    )


def scan_to_csv(result: ScanResult, path) -> None:
    """Serialize a scan: header ``abscissa,rate,sigma``, one row per step,
    then a ``# visibility=<value>`` comment line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("abscissa,rate,sigma\n")
        for a, r, s in zip(result.abscissa, result.rates, result.sigmas):
            fh.write(f"{float(a)!r},{float(r)!r},{float(s)!r}\n")
        fh.write(f"# visibility={float(result.visibility)!r}\n")

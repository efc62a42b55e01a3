"""Named bench scenarios and their report/output plumbing.

Each scenario reproduces one measurement of the singlet-beam bench:

* ``hom_even_dip``      - glass plate removed (Gaussian pump), psi+ pairs,
                          coincidences across the two output ports vs delay;
* ``hom_odd_singlet``   - odd pump, singlet pairs, cross-port dip vs delay;
* ``sameport_hv``       - odd pump, both detectors behind one port with an
                          H/V analyzer, psi- and psi+ curves vs delay;
* ``sameport_pm``       - same, analyzer in the +/- basis;
* ``antibunch_fixed``   - odd pump, singlet beam, slit detectors on one
                          port, D1 fixed while D2 scans across y;
* ``antibunch_together``- both slits scan together (coincidence stays at
                          the slit-width residual);
* ``polarization_test`` - beam splitter removed, polarizer fringes with the
                          fixed analyzer at 0 and at 45 degrees.

Expected rates are deterministic; Poisson noise is opt-in and only
perturbs the emitted counts, never the underlying model.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import detection
from .biphoton import BiphotonState, make_biphoton
from .config import BenchConfig, ConfigError, config_digest
from .detection import (
    Analyzer,
    Circle,
    DetectorSpec,
    Point,
    Port,
    ScanResult,
    Slit,
    TransverseMode,
    hom_scan,
    polarization_correlation_scan,
    pump_profile_singles,
    scan_to_csv,
    transverse_scan,
)
from .optics import FieldGrid, PumpSpec, fresnel_propagate, synthesize_pump
from .polarization import bell_state

__all__ = [
    "SCENARIOS",
    "LabeledScan",
    "ScenarioReport",
    "run_scenario",
    "write_outputs",
    "classify_curve",
    "pump_at_detection",
]

SCENARIOS = (
    "hom_even_dip",
    "hom_odd_singlet",
    "sameport_hv",
    "sameport_pm",
    "antibunch_fixed",
    "antibunch_together",
    "polarization_test",
)

_ODD_PUMP_SCENARIOS = frozenset(
    ("hom_odd_singlet", "sameport_hv", "sameport_pm", "antibunch_fixed", "antibunch_together")
)

# A curve is distinguishable from zero at 3 sigma once its largest expected
# count n satisfies n > 3 sqrt(n), i.e. n > 9.
_NULL_COUNTS = 9.0


@dataclass(frozen=True, eq=False)
class LabeledScan:
    label: str
    scan: ScanResult
    classification: str


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    scenario: str
    curves: tuple[LabeledScan, ...]
    digest: str


def classify_curve(scan: ScanResult, exposure: float) -> str:
    """dip / peak / null / profile / flat, per the counting-statistics rule.

    null: even the largest expected count is within 3 sigma of zero.
    dip/peak: the zero-abscissa rate differs from the baseline by more than
    3 Poisson sigma at the baseline (HOM scans only; others are profiles).
    """
    counts = np.asarray(scan.rates) * exposure
    if counts.max() < _NULL_COUNTS:
        return "null"
    if scan.baseline is None:
        return "profile"
    i0 = int(np.argmin(np.abs(scan.abscissa)))
    delta_counts = (scan.rates[i0] - scan.baseline) * exposure
    sigma = np.sqrt(max(scan.baseline * exposure, 0.0))
    if abs(delta_counts) > 3.0 * sigma:
        return "dip" if delta_counts < 0 else "peak"
    return "flat"


def pump_at_detection(cfg: BenchConfig, parity: str) -> FieldGrid:
    """Synthesize the configured pump and propagate it to the detection plane.

    ``parity`` is "even" (glass plate removed: plain Gaussian) or "odd"
    (the configured phase-step or odd Hermite-Gaussian profile).
    """
    p = cfg.pump
    if parity == "even":
        spec = PumpSpec(kind="gaussian", waist=p.waist, wavelength=p.wavelength)
    else:
        if p.kind == "gaussian":
            raise ConfigError(
                "this scenario requires an odd pump profile: set [pump] kind "
                "to phase_step (or hermite_gauss with an odd y order)"
            )
        spec = PumpSpec(
            kind=p.kind,
            waist=p.waist,
            step_phase=p.step_phase,
            transmission_factor=p.transmission_factor,
            hermite_m=p.hermite_m,
            hermite_n=p.hermite_n,
            wavelength=p.wavelength,
        )
    n = cfg.grid.samples
    w = cfg.grid.window
    field = synthesize_pump(spec, samples=(n, n), window=(w, w))
    return fresnel_propagate(field, p.propagation_distance)


def _delays(cfg: BenchConfig) -> np.ndarray:
    return np.linspace(
        -cfg.scan.delay_halfspan, cfg.scan.delay_halfspan, cfg.scan.delay_steps
    )


def _offsets(cfg: BenchConfig) -> np.ndarray:
    return np.linspace(
        -cfg.scan.transverse_halfspan,
        cfg.scan.transverse_halfspan,
        cfg.scan.transverse_steps,
    )


def _state(cfg: BenchConfig, pump, bell: str, mu: float) -> BiphotonState:
    return make_biphoton(
        pump,
        bell_state(bell),
        overlap=mu,
        wavelength=cfg.state.pair_wavelength,
        filter_bandwidth=cfg.state.filter_bandwidth,
    )


def _circle(cfg: BenchConfig, port: Port, analyzer: Analyzer | None = None) -> DetectorSpec:
    return DetectorSpec(
        port=port, aperture=Circle(cfg.detectors.circle_diameter), analyzer=analyzer
    )


def _slit(cfg: BenchConfig, port: Port, analyzer: Analyzer | None = None) -> DetectorSpec:
    return DetectorSpec(
        port=port,
        aperture=Slit(cfg.detectors.slit_length, cfg.detectors.slit_width),
        analyzer=analyzer,
    )


def _hom_curve(cfg, pump, bell, mu, d1, d2) -> ScanResult:
    state = _state(cfg, pump, bell, mu)
    return hom_scan(
        state, d1, d2, _delays(cfg), cfg.output.exposure, cfg.detectors.quadrature_step
    )


def _sameport_curves(cfg, hwp_angle: float, mu_minus: float, mu_plus: float):
    pump = pump_at_detection(cfg, "odd")
    d1 = _circle(cfg, Port.PORT_1, Analyzer(hwp_angle, "h"))
    d2 = _circle(cfg, Port.PORT_1, Analyzer(hwp_angle, "v"))
    return (
        ("psi_minus", _hom_curve(cfg, pump, "psi_minus", mu_minus, d1, d2)),
        ("psi_plus", _hom_curve(cfg, pump, "psi_plus", mu_plus, d1, d2)),
    )


def _antibunch_curves(cfg, mode: TransverseMode):
    pump = pump_at_detection(cfg, "odd")
    state = _state(cfg, pump, "psi_minus", cfg.state.mu)
    d1 = _slit(cfg, Port.PORT_1, Analyzer(0.0, "h"))
    d2 = _slit(cfg, Port.PORT_1, Analyzer(0.0, "v"))
    offsets = _offsets(cfg)
    exposure = cfg.output.exposure
    step = cfg.detectors.quadrature_step
    curves = [
        ("coincidences", transverse_scan(state, mode, offsets, d1, d2, exposure, step)),
        ("singles_d2", pump_profile_singles(state, d2, offsets, exposure, step)),
    ]
    if mode is TransverseMode.SCAN_TOGETHER:
        curves.append(
            ("singles_d1", pump_profile_singles(state, d1, offsets, exposure, step))
        )
    else:
        fixed = np.zeros(1)
        curves.append(
            ("singles_d1", pump_profile_singles(state, d1, fixed, exposure, step))
        )
    return tuple(curves)


def run_scenario(
    cfg: BenchConfig,
    name: str,
    noise: bool = False,
    seed: int | None = None,
) -> ScenarioReport:
    """Run one named scenario and classify its curves.

    With ``noise`` the emitted rates are Poisson-sampled counts divided by
    the exposure (seeded by ``seed``, falling back to the config seed).
    """
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r} (known: {', '.join(SCENARIOS)})")
    exposure = cfg.output.exposure

    if name == "hom_even_dip":
        pump = pump_at_detection(cfg, "even")
        d1 = _circle(cfg, Port.PORT_1)
        d2 = _circle(cfg, Port.PORT_2)
        curves = (
            ("psi_plus", _hom_curve(cfg, pump, "psi_plus", cfg.state.mu_hom_even, d1, d2)),
        )
    elif name == "hom_odd_singlet":
        pump = pump_at_detection(cfg, "odd")
        d1 = _circle(cfg, Port.PORT_1)
        d2 = _circle(cfg, Port.PORT_2)
        curves = (
            ("psi_minus", _hom_curve(cfg, pump, "psi_minus", cfg.state.mu_hom_odd, d1, d2)),
        )
    elif name == "sameport_hv":
        curves = _sameport_curves(
            cfg,
            0.0,
            cfg.state.mu_sameport_hv_psi_minus,
            cfg.state.mu_sameport_hv_psi_plus,
        )
    elif name == "sameport_pm":
        curves = _sameport_curves(
            cfg,
            np.pi / 8.0,
            cfg.state.mu_sameport_pm_psi_minus,
            cfg.state.mu_sameport_pm_psi_plus,
        )
    elif name == "antibunch_fixed":
        curves = _antibunch_curves(cfg, TransverseMode.FIX_D1_SCAN_D2)
    elif name == "antibunch_together":
        curves = _antibunch_curves(cfg, TransverseMode.SCAN_TOGETHER)
    else:  # polarization_test
        pol = bell_state(cfg.state.bell)
        angles = np.linspace(0.0, 180.0, cfg.scan.angle_steps)
        mu = cfg.state.mu_polarization
        curves = (
            ("fixed_0", polarization_correlation_scan(pol, 0.0, angles, mu, exposure)),
            ("fixed_45", polarization_correlation_scan(pol, 45.0, angles, mu, exposure)),
        )

    if noise:
        rng = np.random.default_rng(cfg.output.seed if seed is None else seed)
        noisy = []
        for label, scan in curves:
            counts = rng.poisson(np.maximum(scan.rates, 0.0) * exposure)
            rates = counts / exposure
            noisy.append(
                (
                    label,
                    replace(
                        scan,
                        rates=rates,
                        sigmas=detection.poisson_sigma(rates, exposure),
                        visibility=(
                            detection.interference_visibility(rates, scan.baseline)
                            if scan.baseline is not None
                            else detection.fringe_visibility(rates)
                        ),
                    ),
                )
            )
        curves = tuple(noisy)

    labeled = tuple(
        LabeledScan(label, scan, classify_curve(scan, exposure)) for label, scan in curves
    )
    return ScenarioReport(scenario=name, curves=labeled, digest=config_digest(cfg))


def write_outputs(reports, directory) -> list[Path]:
    """Write per-curve CSVs and a combined summary.txt; returns the paths.

    Accepts one report or an iterable.  Outputs are byte-identical across
    runs with identical config and seed (floats via repr, fixed ordering).
    """
    if isinstance(reports, ScenarioReport):
        reports = [reports]
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    paths: list[Path] = []
    summary_lines: list[str] = []
    for report in reports:
        for curve in report.curves:
            path = out / f"{report.scenario}__{curve.label}.csv"
            try:
                scan_to_csv(curve.scan, path)
            except OSError as exc:
                raise OSError(f"failed writing {path}: {exc}") from exc
            paths.append(path)
            summary_lines.append(
                f"scenario={report.scenario} curve={curve.label} "
                f"visibility={float(curve.scan.visibility)!r} "
                f"classification={curve.classification} digest={report.digest}"
            )
    summary = out / "summary.txt"
    try:
        summary.write_text("\n".join(summary_lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"failed writing {summary}: {exc}") from exc
    paths.append(summary)
    return paths

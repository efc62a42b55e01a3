"""Bench configuration: sectioned key = value text with SI length suffixes.

Grammar: section headers in square brackets, one ``key = value`` per line,
``#`` starts a comment.  Length values accept a unit suffix (m, mm, um, nm)
and are stored in meters.  Unknown sections or keys are errors; omitted
keys take the defaults below, which reproduce the reference bench (351 nm
pump, 702 nm pairs, 3 m propagation, 3 mm circular apertures,
0.3 mm x 3 mm slits, 1 nm filter).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, fields

__all__ = [
    "ConfigError",
    "PumpConfig",
    "StateConfig",
    "GridConfig",
    "DetectorsConfig",
    "ScanConfig",
    "OutputConfig",
    "BenchConfig",
    "parse_config",
    "load_config",
    "render_config",
    "config_digest",
]

_LENGTH_UNITS = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}


class ConfigError(ValueError):
    """Config syntax or validation error, carrying a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass
class PumpConfig:
    kind: str = "phase_step"
    waist: float = 1e-3
    step_phase: float = math.pi
    transmission_factor: float = 1.0
    hermite_m: int = 0
    hermite_n: int = 1
    wavelength: float = 351e-9
    propagation_distance: float = 3.0


@dataclass
class StateConfig:
    bell: str = "psi_minus"
    mu: float = 1.0
    mu_hom_even: float = 0.92
    mu_hom_odd: float = 0.82
    mu_sameport_hv_psi_minus: float = 0.73
    mu_sameport_hv_psi_plus: float = 0.76
    mu_sameport_pm_psi_minus: float = 0.76
    mu_sameport_pm_psi_plus: float = 1.0
    mu_polarization: float = 0.97
    pair_wavelength: float = 702e-9
    filter_bandwidth: float = 1e-9


@dataclass
class GridConfig:
    samples: int = 256
    window: float = 0.02


@dataclass
class DetectorsConfig:
    circle_diameter: float = 3e-3
    slit_width: float = 0.3e-3  # narrow extent, along the y scan direction
    slit_length: float = 3e-3  # long extent, along x
    quadrature_step: float = 0.075e-3


@dataclass
class ScanConfig:
    delay_halfspan: float = 1.5e-3
    delay_steps: int = 61
    transverse_halfspan: float = 2e-3
    transverse_steps: int = 41
    angle_steps: int = 37


@dataclass
class OutputConfig:
    directory: str = "out"
    exposure: float = 2e9
    seed: int = 0


@dataclass
class BenchConfig:
    pump: PumpConfig = field(default_factory=PumpConfig)
    state: StateConfig = field(default_factory=StateConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    detectors: DetectorsConfig = field(default_factory=DetectorsConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


def _parse_length(raw: str, key: str, line: int) -> float:
    tokens = raw.split()
    if len(tokens) not in (1, 2):
        raise ConfigError(f"bad value for {key!r}: {raw!r}", line)
    try:
        value = float(tokens[0])
    except ValueError:
        raise ConfigError(f"bad numeric value for {key!r}: {tokens[0]!r}", line)
    if len(tokens) == 2:
        factor = _LENGTH_UNITS.get(tokens[1])
        if factor is None:
            raise ConfigError(
                f"unknown unit {tokens[1]!r} for {key!r} "
                f"(known: {', '.join(sorted(_LENGTH_UNITS))})",
                line,
            )
        value *= factor
    return value


def _parse_float(raw: str, key: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad numeric value for {key!r}: {raw!r}", line)


def _parse_int(raw: str, key: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"bad integer value for {key!r}: {raw!r}", line)


def _parse_str(raw: str, key: str, line: int) -> str:
    return raw


# key -> (parser, constraint) where constraint is None, "positive",
# "nonnegative", "unit" (in [0, 1]) or a tuple of allowed strings.
_SCHEMA: dict[str, dict[str, tuple]] = {
    "pump": {
        "kind": (_parse_str, ("gaussian", "hermite_gauss", "phase_step")),
        "waist": (_parse_length, "positive"),
        "step_phase": (_parse_float, None),
        "transmission_factor": (_parse_float, "unit_open"),
        "hermite_m": (_parse_int, "nonnegative"),
        "hermite_n": (_parse_int, "nonnegative"),
        "wavelength": (_parse_length, "positive"),
        "propagation_distance": (_parse_length, "nonnegative"),
    },
    "state": {
        "bell": (_parse_str, ("psi_minus", "psi_plus", "phi_minus", "phi_plus")),
        "mu": (_parse_float, "unit"),
        "mu_hom_even": (_parse_float, "unit"),
        "mu_hom_odd": (_parse_float, "unit"),
        "mu_sameport_hv_psi_minus": (_parse_float, "unit"),
        "mu_sameport_hv_psi_plus": (_parse_float, "unit"),
        "mu_sameport_pm_psi_minus": (_parse_float, "unit"),
        "mu_sameport_pm_psi_plus": (_parse_float, "unit"),
        "mu_polarization": (_parse_float, "unit"),
        "pair_wavelength": (_parse_length, "positive"),
        "filter_bandwidth": (_parse_length, "positive"),
    },
    "grid": {
        "samples": (_parse_int, "positive"),
        "window": (_parse_length, "positive"),
    },
    "detectors": {
        "circle_diameter": (_parse_length, "positive"),
        "slit_width": (_parse_length, "positive"),
        "slit_length": (_parse_length, "positive"),
        "quadrature_step": (_parse_length, "positive"),
    },
    "scan": {
        "delay_halfspan": (_parse_length, "positive"),
        "delay_steps": (_parse_int, "positive"),
        "transverse_halfspan": (_parse_length, "positive"),
        "transverse_steps": (_parse_int, "positive"),
        "angle_steps": (_parse_int, "positive"),
    },
    "output": {
        "directory": (_parse_str, None),
        "exposure": (_parse_float, "positive"),
        "seed": (_parse_int, None),
    },
}

_SECTION_TYPES = {
    "pump": PumpConfig,
    "state": StateConfig,
    "grid": GridConfig,
    "detectors": DetectorsConfig,
    "scan": ScanConfig,
    "output": OutputConfig,
}


def _check_constraint(value, constraint, key: str, line: int):
    if constraint is None:
        return
    if isinstance(constraint, tuple):
        if value not in constraint:
            raise ConfigError(
                f"invalid value for {key!r}: {value!r} "
                f"(allowed: {', '.join(constraint)})",
                line,
            )
        return
    if constraint == "positive" and not value > 0:
        raise ConfigError(f"dimensional error: {key!r} must be positive, got {value!r}", line)
    if constraint == "nonnegative" and value < 0:
        raise ConfigError(
            f"dimensional error: {key!r} must be nonnegative, got {value!r}", line
        )
    if constraint == "unit" and not 0.0 <= value <= 1.0:
        raise ConfigError(f"{key!r} must lie in [0, 1], got {value!r}", line)
    if constraint == "unit_open" and not 0.0 < value <= 1.0:
        raise ConfigError(f"{key!r} must lie in (0, 1], got {value!r}", line)


def parse_config(text: str) -> BenchConfig:
    """Parse bench-description text into a :class:`BenchConfig`.

    Raises :class:`ConfigError` with a line number for syntax errors,
    unknown sections/keys, bad units and out-of-range values.
    """
    cfg = BenchConfig()
    section: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"malformed section header: {raw.strip()!r}", lineno)
            name = stripped[1:-1].strip()
            if name not in _SCHEMA:
                raise ConfigError(
                    f"unknown section {name!r} "
                    f"(known: {', '.join(sorted(_SCHEMA))})",
                    lineno,
                )
            section = name
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", lineno)
        if section is None:
            raise ConfigError("key outside any [section]", lineno)
        key, _, raw_value = stripped.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        schema = _SCHEMA[section]
        if key not in schema:
            raise ConfigError(
                f"unknown key {key!r} in section [{section}] "
                f"(known: {', '.join(sorted(schema))})",
                lineno,
            )
        if not raw_value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        parser, constraint = schema[key]
        value = parser(raw_value, key, lineno)
        _check_constraint(value, constraint, key, lineno)
        setattr(getattr(cfg, section), key, value)
    return cfg


def load_config(path) -> BenchConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def render_config(cfg: BenchConfig) -> str:
    """Canonical text form; ``parse_config(render_config(cfg)) == cfg``.

    Lengths are rendered in plain meters (floats round-trip via repr).
    """
    lines: list[str] = []
    for section, cls in _SECTION_TYPES.items():
        lines.append(f"[{section}]")
        sub = getattr(cfg, section)
        for f in fields(cls):
            value = getattr(sub, f.name)
            if isinstance(value, float):
                lines.append(f"{f.name} = {value!r}")
            else:
                lines.append(f"{f.name} = {value}")
        lines.append("")
    return "\n".join(lines)


def config_digest(cfg: BenchConfig) -> str:
    """SHA-256 hex digest of the resolved (canonically rendered) config."""
    return hashlib.sha256(render_config(cfg).encode("utf-8")).hexdigest()

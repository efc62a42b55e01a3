"""Numerical bench for two-photon singlet-beam interference.

Simulates polarization-entangled photon pairs whose spatial amplitude
inherits the pump transverse profile, a symmetric 50-50 beam splitter whose
reflection mirrors the y coordinate, and finite-aperture coincidence
detection.  Controlling the pump parity in y switches which polarization
exchange symmetry leaves through a single output port: an odd pump sends
singlet pairs into one beam, where they remain spatially antibunched.
"""

from .biphoton import (
    BiphotonState,
    PortPair,
    PortPairAmplitude,
    beam_splitter_transform,
    coherence_length,
    coincidence_density,
    delay_envelope,
    make_biphoton,
    two_photon_amplitude,
)
from .config import BenchConfig, ConfigError, load_config, parse_config, render_config
from .detection import (
    Analyzer,
    Circle,
    DetectorSpec,
    Point,
    Port,
    ScanResult,
    Slit,
    TransverseMode,
    coincidence_rate,
    fringe_visibility,
    hom_scan,
    interference_visibility,
    polarization_correlation_scan,
    transverse_scan,
    visibility,
)
from .optics import (
    FieldGrid,
    PumpSpec,
    field_to_csv,
    fresnel_propagate,
    parity_decompose,
    synthesize_pump,
)
from .polarization import (
    BellState,
    PolBasis,
    TwoPhotonPolState,
    analyzer_projection,
    apply_two_qubit,
    bell_state,
    exchange_projections,
    fidelity,
    wave_plate,
)
from .scenarios import SCENARIOS, ScenarioReport, run_scenario, write_outputs

__version__ = "0.1.0"

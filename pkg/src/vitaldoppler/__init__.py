"""Radar vital-sign simulation with phase-extraction and velocity-time-map processing."""

from .config import ScenarioConfig, StftSettings, load_config
from .errors import (
    AbsentRateError,
    ConfigError,
    ContractError,
    DegenerateSignalError,
    InvalidInputError,
    InvalidParameterError,
    PipelineError,
    VelocityRangeError,
    VitalDopplerError,
)
from .phase import PhaseSeries, extract_phase, phase_derivative, phase_to_displacement, unwrap_phase
from .pipeline import OutputBundle, Scenario, run_scenario
from .rates import (
    EstimateSource,
    EstimationParams,
    HarmonicGroup,
    RateEstimate,
    estimate_rates,
    find_peaks,
    harmonic_group_score,
)
from .signal_model import (
    BasebandSignal,
    MotionTrace,
    RadarConfig,
    ScattererMagnitudes,
    ScattererModel,
    TraceLabel,
    VitalSignParams,
    integrate_rate,
    single_point_signal,
    synth_heartbeat,
    synth_respiration,
    two_point_signal,
)
from .slices import VelocitySlice, detect_impulses, extract_slice, log_compress, slice_spectrum
from .spectral import (
    Spectrum,
    VelocityTimeMap,
    dft,
    doppler_to_velocity,
    spectrum_of_series,
    stft,
    velocity_time_map,
)

__version__ = "0.1.0"

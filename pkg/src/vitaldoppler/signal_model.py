"""Vital-sign motion synthesis and point-scatterer baseband models.

Displacements are in meters, rates in Hz and the time grid is
``t[n] = n / sample_rate`` starting at zero.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import InvalidInputError, InvalidParameterError

SPEED_OF_LIGHT = 299_792_458.0


class TraceLabel(enum.Enum):
    RESPIRATION = "Respiration"
    HEARTBEAT = "Heartbeat"
    COMBINED = "Combined"


class ScattererModel(enum.Enum):
    SINGLE_POINT = "SinglePoint"
    TWO_POINT = "TwoPoint"


@dataclass(frozen=True)
class RadarConfig:
    """Radar and recording settings.

    ``standoff_range_r0`` only adds a constant phase offset and is zero by
    default; it is kept so that offset can be exercised explicitly.
    """

    carrier_frequency: float = 60e9
    sample_rate: float = 120.0
    duration: float = 60.0
    standoff_range_r0: float = 0.0

    def __post_init__(self):
        for name in ("carrier_frequency", "sample_rate", "duration"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidParameterError(f"{name} must be > 0, got {value!r}")
        if self.n_samples < 2:
            raise InvalidParameterError(
                f"sample_rate * duration must give at least 2 samples, got {self.n_samples}"
            )

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def n_samples(self):
        return int(round(self.sample_rate * self.duration))

    @property
    def time(self):
        return np.arange(self.n_samples) / self.sample_rate


@dataclass(frozen=True)
class VitalSignParams:
    respiration_rate_fb: float = 0.2
    heart_rate_fh: float = 1.1
    respiration_amplitude_ab: float = 1.0e-2
    heart_amplitude_ah: float = 1.0e-4
    hr_ratio_db: float = -10.0  # heart scatterer magnitude relative to respiration, amplitude dB

    def __post_init__(self):
        if not self.respiration_rate_fb > 0:
            raise InvalidParameterError("respiration_rate_fb must be > 0")
        if not self.heart_rate_fh > 0:
            raise InvalidParameterError("heart_rate_fh must be > 0")
        if not self.respiration_amplitude_ab >= 0:
            raise InvalidParameterError("respiration_amplitude_ab must be >= 0")
        if not self.heart_amplitude_ah >= 0:
            raise InvalidParameterError("heart_amplitude_ah must be >= 0")
        if not np.isfinite(self.hr_ratio_db):
            raise InvalidParameterError("hr_ratio_db must be finite")


@dataclass(frozen=True)
class ScattererMagnitudes:
    x0: float = 1.0
    xr: float = 1.0
    xh: float = 1.0

    def __post_init__(self):
        if min(self.x0, self.xr, self.xh) < 0:
            raise InvalidParameterError("scatterer magnitudes must be >= 0")

    @classmethod
    def from_params(cls, params):
        """Unit respiration/single-point magnitude, heart set from the H-R ratio."""
        return cls(x0=1.0, xr=1.0, xh=10.0 ** (params.hr_ratio_db / 20.0))


@dataclass(frozen=True, eq=False)
class MotionTrace:
    samples: np.ndarray
    sample_rate: float
    label: TraceLabel

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise InvalidInputError("motion trace must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            raise InvalidInputError("motion trace contains non-finite values")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    @property
    def time(self):
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True, eq=False)
class BasebandSignal:
    iq: np.ndarray
    sample_rate: float
    model: ScattererModel = field(default=ScattererModel.SINGLE_POINT)

    def __post_init__(self):
        iq = np.asarray(self.iq, dtype=complex)
        if iq.ndim != 1:
            raise InvalidInputError("baseband signal must be one-dimensional")
        if not np.all(np.isfinite(iq)):
            raise InvalidInputError("baseband signal contains non-finite values")
        iq.setflags(write=False)
        object.__setattr__(self, "iq", iq)

    def __len__(self):
        return len(self.iq)

    def conj(self):
        return BasebandSignal(np.conj(self.iq), self.sample_rate, self.model)


def integrate_rate(rate, sample_rate, n_samples):
    """Cumulative number of cycles of a (possibly time-varying) rate.

    A scalar rate uses the closed form ``rate * n / sample_rate``; a sampled
    rate is integrated with the cumulative trapezoid rule starting at zero.
    """
    if n_samples < 1:
        raise InvalidParameterError("n_samples must be >= 1")
    if np.ndim(rate) == 0:
        rate = float(rate)
        if rate < 0 or not np.isfinite(rate):
            raise InvalidParameterError(f"rate must be finite and >= 0, got {rate}")
        return rate * np.arange(n_samples) / sample_rate
    rate = np.asarray(rate, dtype=float)
    if rate.shape != (n_samples,):
        raise InvalidInputError(f"sampled rate must have length {n_samples}, got {rate.shape}")
    if np.any(rate < 0) or not np.all(np.isfinite(rate)):
        raise InvalidParameterError("sampled rate must be finite and >= 0 everywhere")
    return cumulative_trapezoid(rate, dx=1.0 / sample_rate, initial=0.0)


def respiration_shape(cycles):
    """Bell-shaped respiration waveform in [-1, 1]; -1 at whole cycles."""
    return (5.0 - 2.0 ** (2.0 + np.cos(2.0 * np.pi * cycles))) / 3.0


def heartbeat_shape(cycles):
    """Impulsive heartbeat waveform in [-1, 1]; zero at whole cycles."""
    m = np.mod(-np.asarray(cycles, dtype=float), 1.0)
    # np.mod can return 1.0 for tiny negative inputs
    m = np.where(m >= 1.0, 0.0, m)
    return np.sin(2.0 * np.pi * m ** 10)


def synth_respiration(params, config, rate=None):
    """Respiration displacement trace.

    ``rate`` optionally overrides the constant ``params.respiration_rate_fb``
    with a sampled rate sequence.
    """
    rate = params.respiration_rate_fb if rate is None else rate
    cycles = integrate_rate(rate, config.sample_rate, config.n_samples)
    samples = params.respiration_amplitude_ab * respiration_shape(cycles)
    return MotionTrace(samples, config.sample_rate, TraceLabel.RESPIRATION)


def synth_heartbeat(params, config, rate=None):
    rate = params.heart_rate_fh if rate is None else rate
    cycles = integrate_rate(rate, config.sample_rate, config.n_samples)
    samples = params.heart_amplitude_ah * heartbeat_shape(cycles)
    return MotionTrace(samples, config.sample_rate, TraceLabel.HEARTBEAT)


def combined_trace(rb, rh):
    _check_pair(rb, rh)
    return MotionTrace(rb.samples + rh.samples, rb.sample_rate, TraceLabel.COMBINED)


def _check_pair(rb, rh):
    if len(rb) != len(rh):
        raise InvalidInputError(f"trace length mismatch: {len(rb)} vs {len(rh)}")
    if rb.sample_rate != rh.sample_rate:
        raise InvalidInputError(
            f"trace sample-rate mismatch: {rb.sample_rate} vs {rh.sample_rate}"
        )


def _phase(samples, config):
    return (4.0 * np.pi / config.wavelength) * (samples + config.standoff_range_r0)


def single_point_signal(rb, rh, mags, config):
    """Both motions carried by one scatterer of magnitude ``mags.x0``."""
    _check_pair(rb, rh)
    iq = mags.x0 * np.exp(1j * _phase(rb.samples + rh.samples, config))
    return BasebandSignal(iq, rb.sample_rate, ScattererModel.SINGLE_POINT)


def two_point_signal(rb, rh, mags, config):
    """Respiration and heartbeat carried by separate scatterers ``xr`` and ``xh``."""
    _check_pair(rb, rh)
    iq = mags.xr * np.exp(1j * _phase(rb.samples, config)) + mags.xh * np.exp(
        1j * _phase(rh.samples, config)
    )
    return BasebandSignal(iq, rb.sample_rate, ScattererModel.TWO_POINT)


def motion_signal(trace, config, magnitude=1.0):
    """Unit reflection driven by a single displacement trace."""
    iq = magnitude * np.exp(1j * _phase(trace.samples, config))
    return BasebandSignal(iq, trace.sample_rate, ScattererModel.SINGLE_POINT)

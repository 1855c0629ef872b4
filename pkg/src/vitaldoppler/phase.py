"""Phase-extraction pipeline: arctangent, 1-D unwrap, displacement, derivative."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateSignalError, InvalidInputError
from .signal_model import MotionTrace, TraceLabel

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class PhaseSeries:
    values: np.ndarray
    sample_rate: float
    unwrapped: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def time(self):
        return np.arange(len(self.values)) / self.sample_rate


def wrap_to_pi(x):
    """Map angles into (-pi, pi]."""
    x = np.asarray(x, dtype=float)
    return x - TWO_PI * np.ceil((x - np.pi) / TWO_PI)


def extract_phase(signal):
    """Four-quadrant arctangent of each I/Q sample, in (-pi, pi]."""
    iq = signal.iq
    if iq.size == 0:
        raise InvalidInputError("signal is empty")
    zero = np.flatnonzero(iq == 0)
    if zero.size:
        raise DegenerateSignalError(zero[0])
    values = np.arctan2(iq.imag, iq.real)
    # arctan2 returns -pi for a negative real axis with signed-zero imag
    values[values <= -np.pi] = np.pi
    return PhaseSeries(values, signal.sample_rate, unwrapped=False)


def unwrap_phase(phase):
    """Correct every step by the multiple of 2*pi that brings it into (-pi, pi]."""
    values = phase.values
    if len(values) < 2:
        return PhaseSeries(values.copy(), phase.sample_rate, unwrapped=True)
    steps = wrap_to_pi(np.diff(values))
    unwrapped = np.cumsum(np.concatenate(([values[0]], steps)))
    return PhaseSeries(unwrapped, phase.sample_rate, unwrapped=True)


def phase_to_displacement(phase, config):
    """Range change relative to the first sample, ``lambda / (4 pi)`` per radian."""
    if not phase.unwrapped:
        raise ContractError("phase_to_displacement requires an unwrapped phase series")
    d = (config.wavelength / (4.0 * np.pi)) * (phase.values - phase.values[0])
    return MotionTrace(d, phase.sample_rate, TraceLabel.COMBINED)


def phase_derivative(phase):
    """Time derivative in rad/s; central differences, one-sided at the ends."""
    if not phase.unwrapped:
        raise ContractError("phase_derivative requires an unwrapped phase series")
    if len(phase) < 2:
        raise InvalidInputError("phase_derivative needs at least 2 samples")
    return np.gradient(phase.values, 1.0 / phase.sample_rate)

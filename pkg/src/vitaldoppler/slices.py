"""Fixed-velocity slices through a velocity-time map."""

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .errors import ContractError, InvalidInputError, VelocityRangeError
from .spectral import spectrum_of_series, to_db


@dataclass(frozen=True, eq=False)
class VelocitySlice:
    values: np.ndarray
    slice_velocity: float
    requested_velocity: float
    sample_rate: float
    compressed: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def time(self):
        return np.arange(len(self.values)) / self.sample_rate


def velocity_bin(vmap, velocity):
    """Index of the velocity bin nearest ``velocity``; ties go to the lower bin."""
    v = vmap.velocity_axis
    half = 0.5 * vmap.velocity_resolution
    if not (v[0] - half <= velocity <= v[-1] + half):
        raise VelocityRangeError(velocity, (v[0], v[-1]))
    return int(np.argmin(np.abs(v - velocity)))


def extract_slice(vmap, requested_velocity):
    """Linear-magnitude time series of the bin nearest ``requested_velocity``."""
    row = velocity_bin(vmap, requested_velocity)
    return VelocitySlice(
        values=np.array(vmap.magnitude[row], dtype=float),
        slice_velocity=float(vmap.velocity_axis[row]),
        requested_velocity=float(requested_velocity),
        sample_rate=vmap.frame_rate,
        compressed=False,
    )


def log_compress(vslice):
    if vslice.compressed:
        raise ContractError("slice is already log-compressed")
    return replace(vslice, values=to_db(vslice.values), compressed=True)


def slice_spectrum(vslice):
    if len(vslice) == 0:
        raise InvalidInputError("slice is empty")
    return spectrum_of_series(vslice.values, vslice.sample_rate, remove_mean=True)


def high_velocity_energy(vmap, min_abs_velocity=None):
    """Mean dB magnitude per frame over bins with ``|v| >= min_abs_velocity``.

    Defaults to the upper half of the unambiguous velocity span.
    """
    v = vmap.velocity_axis
    if min_abs_velocity is None:
        min_abs_velocity = 0.5 * np.abs(v).max()
    rows = np.abs(v) >= min_abs_velocity
    if not rows.any():
        raise InvalidInputError(f"no velocity bins with |v| >= {min_abs_velocity:g} m/s")
    return vmap.magnitude_db[rows].mean(axis=0)


def detect_impulses(vmap, min_abs_velocity=None, prominence_fraction=0.5):
    """Times (s) of broadband impulse columns in a velocity-time map.

    An impulse is a local maximum of :func:`high_velocity_energy` whose
    prominence is at least ``prominence_fraction`` of the distance between
    the median and the maximum of that energy.
    """
    energy = high_velocity_energy(vmap, min_abs_velocity)
    span = energy.max() - np.median(energy)
    if span <= 0:
        return np.empty(0)
    peaks, _ = find_peaks(energy, prominence=prominence_fraction * span)
    return vmap.time_axis[peaks]

"""DFT, STFT and velocity-time maps.

All magnitudes go through :func:`to_db`, which adds ``EPS`` before the
logarithm so every value stays finite (floor at -240 dB).
"""

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import get_window

from .errors import InvalidInputError, InvalidParameterError

EPS = 1e-12
FLOOR_DB = 20.0 * np.log10(EPS)


def to_db(magnitude):
    return 20.0 * np.log10(np.abs(magnitude) + EPS)


def from_db(magnitude_db):
    return 10.0 ** (np.asarray(magnitude_db, dtype=float) / 20.0)


class SpectrumReference(enum.Enum):
    ABSOLUTE = "Absolute"
    PEAK_NORMALIZED = "PeakNormalized"


@dataclass(frozen=True, eq=False)
class Spectrum:
    frequencies: np.ndarray
    magnitude_db: np.ndarray
    reference: SpectrumReference = SpectrumReference.ABSOLUTE

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        m = np.asarray(self.magnitude_db, dtype=float)
        if f.shape != m.shape or f.ndim != 1:
            raise InvalidInputError("frequencies and magnitude_db must be 1-D and equal length")
        if len(f) > 1 and not np.all(np.diff(f) > 0):
            raise InvalidInputError("frequencies must be strictly ascending")
        f.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "magnitude_db", m)

    def __len__(self):
        return len(self.frequencies)

    @property
    def resolution(self):
        return float(self.frequencies[1] - self.frequencies[0])

    @property
    def power(self):
        """Linear power per bin."""
        return 10.0 ** (self.magnitude_db / 10.0)

    def nearest_bin(self, frequency):
        return int(np.argmin(np.abs(self.frequencies - frequency)))

    def at(self, frequency):
        return float(self.magnitude_db[self.nearest_bin(frequency)])

    def peak_normalized(self):
        if self.reference is SpectrumReference.PEAK_NORMALIZED:
            return self
        return Spectrum(
            self.frequencies,
            self.magnitude_db - self.magnitude_db.max(),
            SpectrumReference.PEAK_NORMALIZED,
        )


@dataclass(frozen=True, eq=False)
class VelocityTimeMap:
    """Doppler magnitude indexed by (velocity bin, time frame).

    ``magnitude`` keeps the linear values the dB matrix was computed from so
    that slices can be taken without a lossy dB round trip.
    """

    magnitude_db: np.ndarray
    velocity_axis: np.ndarray
    time_axis: np.ndarray
    window_length: int
    fft_length: int
    magnitude: np.ndarray = None

    def __post_init__(self):
        db = np.asarray(self.magnitude_db, dtype=float)
        v = np.asarray(self.velocity_axis, dtype=float)
        t = np.asarray(self.time_axis, dtype=float)
        if db.shape != (len(v), len(t)):
            raise InvalidInputError(
                f"map shape {db.shape} inconsistent with axes ({len(v)}, {len(t)})"
            )
        if len(v) != self.fft_length:
            raise InvalidInputError("velocity axis length must equal fft_length")
        if not np.all(np.diff(v) > 0):
            raise InvalidInputError("velocity axis must be strictly ascending")
        lin = from_db(db) if self.magnitude is None else np.asarray(self.magnitude, dtype=float)
        for a in (db, v, t, lin):
            a.setflags(write=False)
        object.__setattr__(self, "magnitude_db", db)
        object.__setattr__(self, "velocity_axis", v)
        object.__setattr__(self, "time_axis", t)
        object.__setattr__(self, "magnitude", lin)

    @property
    def shape(self):
        return self.magnitude_db.shape

    @property
    def velocity_resolution(self):
        return float(self.velocity_axis[1] - self.velocity_axis[0])

    @property
    def frame_rate(self):
        if len(self.time_axis) < 2:
            raise InvalidInputError("map has a single frame; frame rate undefined")
        return 1.0 / float(self.time_axis[1] - self.time_axis[0])


def dft(x, fft_length=None):
    """Zero-padded DFT, ``X[k] = sum_n x[n] exp(-2j pi k n / fft_length)``."""
    x = np.asarray(x, dtype=complex)
    if fft_length is None:
        fft_length = len(x)
    if fft_length < len(x):
        raise InvalidInputError(f"fft_length {fft_length} shorter than input length {len(x)}")
    return np.fft.fft(x, n=fft_length)


def spectrum_of_series(x, sample_rate, remove_mean=True):
    """One-sided magnitude spectrum (dB) of a real series, 0 .. fs/2."""
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        raise InvalidInputError("spectrum needs at least 2 samples")
    if remove_mean:
        x = x - x.mean()
    n = len(x)
    X = dft(x)[: n // 2 + 1]
    return Spectrum(np.arange(n // 2 + 1) * sample_rate / n, to_db(X))


def make_window(name, length):
    """Periodic analysis window, e.g. ``"hann"`` or ``"boxcar"``."""
    if name in ("rect", "rectangular"):
        name = "boxcar"
    return get_window(name, length, fftbins=True)


def stft(signal, window_length, hop=1, fft_length=256, window="hann"):
    """Frames of the windowed, zero-padded DFT; shape ``(n_frames, fft_length)``.

    ``signal`` may be a :class:`BasebandSignal` or a complex array.
    """
    iq = np.asarray(getattr(signal, "iq", signal), dtype=complex)
    if window_length < 1 or hop < 1:
        raise InvalidParameterError("window_length and hop must be >= 1")
    if window_length > fft_length:
        raise InvalidParameterError(
            f"window_length {window_length} exceeds fft_length {fft_length}"
        )
    if len(iq) < window_length:
        raise InvalidInputError(
            f"signal of {len(iq)} samples shorter than window of {window_length}"
        )
    w = make_window(window, window_length) if isinstance(window, str) else np.asarray(window)
    frames = np.lib.stride_tricks.sliding_window_view(iq, window_length)[::hop]
    return np.fft.fft(frames * w, n=fft_length, axis=1)


def doppler_to_velocity(f_d, wavelength):
    if not wavelength > 0:
        raise InvalidParameterError("wavelength must be > 0")
    return -(wavelength / 2.0) * np.asarray(f_d, dtype=float)


def velocity_time_map(signal, config, window_length, hop=1, fft_length=256, window="hann"):
    frames = stft(signal, window_length, hop, fft_length, window)
    fs = config.sample_rate
    # centered Doppler axis [-fs/2, fs/2); the Doppler sign flip reverses it
    doppler = (np.arange(fft_length) - fft_length // 2) * fs / fft_length
    spectra = np.fft.fftshift(frames, axes=1)[:, ::-1]
    velocity = doppler_to_velocity(doppler[::-1], config.wavelength) + 0.0
    magnitude = np.abs(spectra).T
    n_frames = frames.shape[0]
    time_axis = (np.arange(n_frames) * hop + window_length / 2.0) / fs
    return VelocityTimeMap(
        magnitude_db=to_db(magnitude),
        velocity_axis=velocity,
        time_axis=time_axis,
        window_length=window_length,
        fft_length=fft_length,
        magnitude=magnitude,
    )

"""Respiration and heart-rate estimation by harmonic grouping of spectral peaks."""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks

from .errors import AbsentRateError, InvalidInputError, InvalidParameterError
from .spectral import FLOOR_DB, Spectrum

# relative slack so bins exactly one resolution step away count as inside
_TOL_SLACK = 1e-9


class EstimateSource(enum.Enum):
    PHASE_SPECTRUM = "PhaseSpectrum"
    SLICE_SPECTRUM = "SliceSpectrum"


@dataclass(frozen=True)
class EstimationParams:
    respiration_band: tuple = (0.08, 0.6)
    heart_band: tuple = (0.7, 3.0)
    k_max: int = 4
    tolerance_bins: float = 1.0
    mask_width: float = 0.05
    min_prominence_db: float = 6.0

    def __post_init__(self):
        for name in ("respiration_band", "heart_band"):
            lo, hi = getattr(self, name)
            if not 0 <= lo < hi:
                raise InvalidParameterError(f"{name} must satisfy 0 <= low < high, got {(lo, hi)}")
        if self.k_max < 1:
            raise InvalidParameterError("k_max must be >= 1")
        if self.tolerance_bins < 0 or self.mask_width < 0:
            raise InvalidParameterError("tolerance_bins and mask_width must be >= 0")


@dataclass(frozen=True)
class HarmonicGroup:
    fundamental: float
    harmonic_count: int
    score: float
    member_bins: tuple

    @property
    def score_db(self):
        return 10.0 * np.log10(self.score) if self.score > 0 else -np.inf


@dataclass(frozen=True)
class RateEstimate:
    """Estimated rates; a rate is ``None`` when its band held no usable peak."""

    respiration_hz: float
    heart_hz: float
    respiration_group: HarmonicGroup
    heart_group: HarmonicGroup
    source: EstimateSource
    absent: tuple = field(default=())


def _band_mask(freqs, band):
    return (freqs >= band[0] - _TOL_SLACK) & (freqs <= band[1] + _TOL_SLACK)


def find_peaks(spec, min_prominence_db, band):
    """Local maxima inside ``band`` with at least ``min_prominence_db`` prominence.

    Prominence is measured on the whole spectrum, so a peak near a band edge
    is judged the same way as one in the middle. Returns ``(frequency, dB)``
    pairs sorted by descending magnitude, then ascending frequency.
    """
    freqs = spec.frequencies
    inside = _band_mask(freqs, band)
    if not inside.any():
        raise InvalidInputError(f"band [{band[0]:g}, {band[1]:g}] Hz contains no spectral bins")
    idx, _ = _scipy_find_peaks(spec.magnitude_db, prominence=min_prominence_db)
    idx = idx[inside[idx]]
    peaks = [(float(freqs[i]), float(spec.magnitude_db[i])) for i in idx]
    return sorted(peaks, key=lambda p: (-p[1], p[0]))


def harmonic_group_score(spec, fundamental, k_max=4, tolerance=None):
    """Sum over harmonics ``k * fundamental`` of the strongest linear power within ``tolerance``.

    ``tolerance`` defaults to one spectral bin. Harmonics above the last
    spectrum frequency are skipped.
    """
    if not fundamental > 0:
        raise InvalidParameterError("fundamental must be > 0")
    if k_max < 1:
        raise InvalidParameterError("k_max must be >= 1")
    if tolerance is None:
        tolerance = spec.resolution
    freqs = spec.frequencies
    power = spec.power
    tol = tolerance * (1.0 + _TOL_SLACK)
    score = 0.0
    members = []
    for k in range(1, k_max + 1):
        target = k * fundamental
        if target > freqs[-1] + tol:
            break
        near = np.flatnonzero(np.abs(freqs - target) <= tol)
        if near.size == 0:
            continue
        best = near[np.argmax(power[near])]
        score += power[best]
        members.append(int(best))
    return HarmonicGroup(float(fundamental), len(members), float(score), tuple(members))


def _best_fundamental(spec, band, params):
    freqs = spec.frequencies
    grid = freqs[_band_mask(freqs, band) & (freqs > 0)]
    tol = params.tolerance_bins * spec.resolution
    groups = [harmonic_group_score(spec, f, params.k_max, tol) for f in grid]
    # np.argmax keeps the first maximum: ties resolve to the lower fundamental
    return groups[int(np.argmax([g.score for g in groups]))]


def mask_harmonics(spec, fundamental, width):
    """Floor every bin within ``width`` Hz of a positive multiple of ``fundamental``."""
    freqs = spec.frequencies
    k = np.maximum(np.round(freqs / fundamental), 1.0)
    hit = np.abs(freqs - k * fundamental) <= width * (1.0 + _TOL_SLACK)
    db = np.where(hit, FLOOR_DB, spec.magnitude_db)
    return Spectrum(freqs, db, spec.reference)


def estimate_respiration(spec, params=EstimationParams()):
    if not find_peaks(spec, params.min_prominence_db, params.respiration_band):
        raise AbsentRateError("respiration", params.respiration_band)
    return _best_fundamental(spec, params.respiration_band, params)


def estimate_heart(spec, params=EstimationParams(), respiration_hz=None):
    """Heart fundamental after flooring the respiration harmonics, if given."""
    if respiration_hz is not None:
        spec = mask_harmonics(spec, respiration_hz, params.mask_width)
    if not find_peaks(spec, params.min_prominence_db, params.heart_band):
        raise AbsentRateError("heart", params.heart_band)
    return _best_fundamental(spec, params.heart_band, params)


def estimate_rates(spec, params=EstimationParams(), source=EstimateSource.PHASE_SPECTRUM):
    """Respiration first, then heart on the respiration-masked spectrum.

    A band with no qualifying peak is reported through ``absent``; if both
    bands are empty :class:`AbsentRateError` is raised.
    """
    lo, hi = params.respiration_band
    if spec.resolution > 0.5 * (hi - lo):
        raise InvalidInputError(
            f"spectrum resolution {spec.resolution:g} Hz too coarse for the respiration band"
        )
    absent = []
    resp = heart = None
    try:
        resp = estimate_respiration(spec, params)
    except AbsentRateError:
        absent.append("respiration")
    try:
        heart = estimate_heart(spec, params, resp.fundamental if resp else None)
    except AbsentRateError as exc:
        if resp is None:
            raise AbsentRateError("respiration and heart", (lo, params.heart_band[1])) from exc
        absent.append("heart")
    return RateEstimate(
        respiration_hz=resp.fundamental if resp else None,
        heart_hz=heart.fundamental if heart else None,
        respiration_group=resp,
        heart_group=heart,
        source=source,
        absent=tuple(absent),
    )

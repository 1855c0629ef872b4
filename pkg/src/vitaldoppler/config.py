"""Scenario configuration: flat ``key = value`` text with ``#`` comments."""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError, VitalDopplerError
from .rates import EstimationParams
from .signal_model import RadarConfig, ScattererModel, VitalSignParams
from .spectral import make_window


@dataclass(frozen=True)
class StftSettings:
    window_seconds: float = 0.1
    hop_samples: int = 1
    fft_length: int = 256
    window: str = "hann"

    def window_samples(self, sample_rate):
        return int(round(self.window_seconds * sample_rate))


@dataclass(frozen=True)
class ScenarioConfig:
    radar: RadarConfig = field(default_factory=RadarConfig)
    vitals: VitalSignParams = field(default_factory=VitalSignParams)
    model: ScattererModel = ScattererModel.TWO_POINT
    stft: StftSettings = field(default_factory=StftSettings)
    slice_velocity: float = 0.147
    estimation: EstimationParams = field(default_factory=EstimationParams)
    output_dir: str = "output"

    @property
    def window_length(self):
        return self.stft.window_samples(self.radar.sample_rate)


def _model(text):
    for m in ScattererModel:
        if text.strip().lower() in (m.value.lower(), m.name.lower()):
            return m
    raise ValueError(f"expected one of {[m.value for m in ScattererModel]}")


# key -> (section, attribute, parser); section None means a top-level field.
# Band edges are stored as tuples and handled separately.
FIELDS = {
    "carrier_frequency": ("radar", "carrier_frequency", float),
    "sample_rate": ("radar", "sample_rate", float),
    "duration": ("radar", "duration", float),
    "standoff_range_r0": ("radar", "standoff_range_r0", float),
    "respiration_rate_fb": ("vitals", "respiration_rate_fb", float),
    "heart_rate_fh": ("vitals", "heart_rate_fh", float),
    "respiration_amplitude_ab": ("vitals", "respiration_amplitude_ab", float),
    "heart_amplitude_ah": ("vitals", "heart_amplitude_ah", float),
    "hr_ratio_db": ("vitals", "hr_ratio_db", float),
    "model": (None, "model", _model),
    "window_seconds": ("stft", "window_seconds", float),
    "hop_samples": ("stft", "hop_samples", int),
    "fft_length": ("stft", "fft_length", int),
    "window": ("stft", "window", str),
    "slice_velocity": (None, "slice_velocity", float),
    "respiration_band_low": ("estimation", ("respiration_band", 0), float),
    "respiration_band_high": ("estimation", ("respiration_band", 1), float),
    "heart_band_low": ("estimation", ("heart_band", 0), float),
    "heart_band_high": ("estimation", ("heart_band", 1), float),
    "k_max": ("estimation", "k_max", int),
    "tolerance_bins": ("estimation", "tolerance_bins", float),
    "mask_width": ("estimation", "mask_width", float),
    "min_prominence_db": ("estimation", "min_prominence_db", float),
    "output_dir": (None, "output_dir", str),
}


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into a dict of raw strings."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = (value, lineno)
    return values


def _get(cfg, key):
    section, attr, _ = FIELDS[key]
    obj = cfg if section is None else getattr(cfg, section)
    if isinstance(attr, tuple):
        return getattr(obj, attr[0])[attr[1]]
    return getattr(obj, attr)


def _raw_sections(cfg):
    sections = {
        name: {f.name: getattr(getattr(cfg, name), f.name) for f in fields(getattr(cfg, name))}
        for name in ("radar", "vitals", "stft", "estimation")
    }
    for band in ("respiration_band", "heart_band"):
        sections["estimation"][band] = list(sections["estimation"][band])
    top = {"model": cfg.model, "slice_velocity": cfg.slice_velocity, "output_dir": cfg.output_dir}
    return sections, top


def build_config(overrides=None, base=None):
    """Apply ``{key: value}`` overrides (strings or typed values) to ``base``.

    Values may carry a line number as ``(value, lineno)`` for error messages.
    """
    base = ScenarioConfig() if base is None else base
    sections, top = _raw_sections(base)
    for key, value in (overrides or {}).items():
        lineno = None
        if isinstance(value, tuple):
            value, lineno = value
        where = f"line {lineno}: " if lineno else ""
        if key not in FIELDS:
            raise ConfigError(f"{where}unknown key {key!r}")
        section, attr, parse = FIELDS[key]
        try:
            parsed = value if isinstance(value, ScattererModel) else parse(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}{key}: cannot parse {value!r} ({exc})") from None
        target = top if section is None else sections[section]
        if isinstance(attr, tuple):
            target[attr[0]][attr[1]] = parsed
        else:
            target[attr] = parsed

    def make(cls, name, kwargs):
        try:
            return cls(**kwargs)
        except VitalDopplerError as exc:
            raise ConfigError(f"{name}: {exc}") from None

    for band in ("respiration_band", "heart_band"):
        sections["estimation"][band] = tuple(sections["estimation"][band])
    cfg = ScenarioConfig(
        radar=make(RadarConfig, "radar", sections["radar"]),
        vitals=make(VitalSignParams, "vitals", sections["vitals"]),
        model=top["model"],
        stft=StftSettings(**sections["stft"]),
        slice_velocity=top["slice_velocity"],
        estimation=make(EstimationParams, "estimation", sections["estimation"]),
        output_dir=top["output_dir"],
    )
    validate(cfg)
    return cfg


def validate(cfg):
    n_win = cfg.window_length
    if n_win < 2:
        raise ConfigError(
            f"window_seconds: {cfg.stft.window_seconds} s gives {n_win} samples, need >= 2"
        )
    n = cfg.stft.fft_length
    if n < 1 or n & (n - 1):
        raise ConfigError(f"fft_length: {n} is not a power of two")
    if n < n_win:
        raise ConfigError(f"fft_length: {n} shorter than window of {n_win} samples")
    if cfg.stft.hop_samples < 1:
        raise ConfigError("hop_samples: must be >= 1")
    try:
        make_window(cfg.stft.window, n_win)
    except ValueError as exc:
        raise ConfigError(f"window: {exc}") from None
    if cfg.radar.n_samples < n_win:
        raise ConfigError("duration: recording shorter than one analysis window")


def load_config(path=None, overrides=None):
    """Defaults, then the file at ``path`` (if any), then ``overrides``."""
    values = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values = parse_config_text(text, str(path))
    values.update(overrides or {})
    return build_config(values)


def _format(value):
    if isinstance(value, ScattererModel):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_to_text(cfg):
    """Resolved configuration in the same ``key = value`` format it is read from."""
    return "".join(f"{key} = {_format(_get(cfg, key))}\n" for key in FIELDS)


def with_output_dir(cfg, output_dir):
    return replace(cfg, output_dir=str(output_dir))

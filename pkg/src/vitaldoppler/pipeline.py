"""End-to-end scenario: synthesis, both processing routes, estimates, files."""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import fileio
from .config import config_to_text
from .errors import AbsentRateError, PipelineError, VitalDopplerError
from .phase import extract_phase, phase_derivative, unwrap_phase
from .rates import EstimateSource, estimate_rates, harmonic_group_score
from .signal_model import (
    ScattererMagnitudes,
    ScattererModel,
    combined_trace,
    motion_signal,
    single_point_signal,
    synth_heartbeat,
    synth_respiration,
    two_point_signal,
)
from .slices import extract_slice, log_compress, slice_spectrum
from .spectral import spectrum_of_series, velocity_time_map

STAGES = ("synth", "map", "phase", "slice", "estimate")


@dataclass
class OutputBundle:
    output_dir: Path
    manifest: list = field(default_factory=list)  # (relative path, role)
    run_parameters: str = ""
    estimates: dict = field(default_factory=dict)

    def add(self, path, role):
        rel = Path(path).relative_to(self.output_dir).as_posix()
        if any(rel == p for p, _ in self.manifest):
            raise PipelineError("manifest", f"{rel} written twice")
        self.manifest.append((rel, role))

    def path(self, name):
        return self.output_dir / name


class Scenario:
    """Lazily evaluated intermediates of one configured run."""

    def __init__(self, cfg):
        self.cfg = cfg

    @cached_property
    def respiration(self):
        return synth_respiration(self.cfg.vitals, self.cfg.radar)

    @cached_property
    def heartbeat(self):
        return synth_heartbeat(self.cfg.vitals, self.cfg.radar)

    @cached_property
    def combined(self):
        return combined_trace(self.respiration, self.heartbeat)

    @cached_property
    def magnitudes(self):
        return ScattererMagnitudes.from_params(self.cfg.vitals)

    def model_signal(self, model):
        build = single_point_signal if model is ScattererModel.SINGLE_POINT else two_point_signal
        return build(self.respiration, self.heartbeat, self.magnitudes, self.cfg.radar)

    @cached_property
    def signal(self):
        return self.model_signal(self.cfg.model)

    def _map(self, signal):
        s = self.cfg.stft
        return velocity_time_map(
            signal, self.cfg.radar, self.cfg.window_length, s.hop_samples, s.fft_length, s.window
        )

    @cached_property
    def respiration_map(self):
        return self._map(motion_signal(self.respiration, self.cfg.radar))

    @cached_property
    def heartbeat_map(self):
        return self._map(motion_signal(self.heartbeat, self.cfg.radar))

    @cached_property
    def combined_map(self):
        return self._map(self.signal)

    def unwrapped_phase_of(self, signal):
        return unwrap_phase(extract_phase(signal))

    @cached_property
    def unwrapped_phase(self):
        return self.unwrapped_phase_of(self.signal)

    @cached_property
    def phase_rate(self):
        return phase_derivative(self.unwrapped_phase)

    @cached_property
    def phase_spectrum(self):
        return spectrum_of_series(self.unwrapped_phase.values, self.cfg.radar.sample_rate)

    @cached_property
    def reference_phase_spectrum(self):
        """Phase spectrum of the single-point signal built from the same traces."""
        if self.cfg.model is ScattererModel.SINGLE_POINT:
            return self.phase_spectrum
        sp = self.model_signal(ScattererModel.SINGLE_POINT)
        return spectrum_of_series(self.unwrapped_phase_of(sp).values, self.cfg.radar.sample_rate)

    @cached_property
    def slice_linear(self):
        return extract_slice(self.combined_map, self.cfg.slice_velocity)

    @cached_property
    def slice_log(self):
        return log_compress(self.slice_linear)

    @cached_property
    def slice_spectrum_linear(self):
        return slice_spectrum(self.slice_linear)

    @cached_property
    def slice_spectrum_log(self):
        return slice_spectrum(self.slice_log)

    def _estimate(self, spec, source):
        try:
            return estimate_rates(spec, self.cfg.estimation, source)
        except AbsentRateError:
            return None

    @cached_property
    def phase_estimate(self):
        return self._estimate(self.phase_spectrum, EstimateSource.PHASE_SPECTRUM)

    @cached_property
    def slice_estimate(self):
        return self._estimate(self.slice_spectrum_log, EstimateSource.SLICE_SPECTRUM)

    @cached_property
    def slice_linear_estimate(self):
        return self._estimate(self.slice_spectrum_linear, EstimateSource.SLICE_SPECTRUM)

    def estimates(self):
        """Flat ``key -> value`` summary of both routes."""
        out = {"model": self.cfg.model.value}
        for prefix, est in (
            ("phase", self.phase_estimate),
            ("slice_log", self.slice_estimate),
            ("slice_linear", self.slice_linear_estimate),
        ):
            out.update(_estimate_fields(prefix, est))

        slice_heart = self.slice_estimate.heart_hz if self.slice_estimate else None
        phase_heart = self.phase_estimate.heart_hz if self.phase_estimate else None
        out["slice.requested_velocity"] = self.slice_linear.requested_velocity
        out["slice.velocity"] = self.slice_linear.slice_velocity
        if slice_heart is not None:
            # phase route judged against the heart rate recovered from the slice
            tol = self.phase_spectrum.resolution + self.slice_spectrum_log.resolution
            out["phase.heart_suppressed"] = phase_heart is None or abs(phase_heart - slice_heart) > tol
            ref_bin = self.reference_phase_spectrum.at(slice_heart)
            out["phase.heart_bin_db"] = self.phase_spectrum.at(slice_heart)
            out["phase.heart_bin_vs_single_point_db"] = self.phase_spectrum.at(slice_heart) - ref_bin
            k_max = self.cfg.estimation.k_max
            lin = harmonic_group_score(self.slice_spectrum_linear, slice_heart, k_max)
            log = harmonic_group_score(self.slice_spectrum_log, slice_heart, k_max)
            out["slice_linear.score_at_heart"] = lin.score
            out["slice_log.score_at_heart"] = log.score
        return out


def _estimate_fields(prefix, est):
    if est is None:
        return {f"{prefix}.respiration_hz": "absent", f"{prefix}.heart_hz": "absent"}
    out = {}
    for name, hz, group in (
        ("respiration", est.respiration_hz, est.respiration_group),
        ("heart", est.heart_hz, est.heart_group),
    ):
        out[f"{prefix}.{name}_hz"] = "absent" if hz is None else hz
        if group is not None:
            out[f"{prefix}.{name}_score"] = group.score
            out[f"{prefix}.{name}_harmonics"] = group.harmonic_count
    return out


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def format_estimates(estimates):
    return "".join(f"{k} = {_format_value(v)}\n" for k, v in estimates.items())


def _write_stage(stage, sc, bundle):
    cfg = sc.cfg
    p = bundle.path
    if stage == "synth":
        for name, trace in (
            ("respiration", sc.respiration),
            ("heartbeat", sc.heartbeat),
            ("combined", sc.combined),
        ):
            path = fileio.write_csv_series(trace.time, trace.samples, p(f"motion_{name}.csv"))
            bundle.add(path, f"{trace.label.value} displacement (m)")
        path = fileio.write_csv_columns(
            [("t", cfg.radar.time), ("i", sc.signal.iq.real), ("q", sc.signal.iq.imag)],
            p("baseband_iq.csv"),
        )
        bundle.add(path, f"{cfg.model.value} baseband signal")
    elif stage == "map":
        for name, vmap in (
            ("respiration", sc.respiration_map),
            ("heartbeat", sc.heartbeat_map),
            ("combined", sc.combined_map),
        ):
            path = fileio.write_csv_matrix(
                vmap.velocity_axis, vmap.time_axis, vmap.magnitude_db, p(f"vtm_{name}.csv")
            )
            bundle.add(path, f"velocity-time map, {name} (dB)")
            path = fileio.write_pgm_heatmap(vmap.magnitude_db, p(f"vtm_{name}.pgm"))
            bundle.add(path, f"velocity-time map image, {name}")
    elif stage == "phase":
        ph = sc.unwrapped_phase
        path = fileio.write_csv_series(ph.time, ph.values, p("phase_unwrapped.csv"))
        bundle.add(path, "unwrapped phase (rad)")
        path = fileio.write_csv_series(ph.time, sc.phase_rate, p("phase_derivative.csv"))
        bundle.add(path, "phase derivative (rad/s)")
        spec = sc.phase_spectrum
        path = fileio.write_csv_series(
            spec.frequencies, spec.magnitude_db, p("phase_spectrum.csv"), x_name="f"
        )
        bundle.add(path, "unwrapped-phase spectrum (dB)")
    elif stage == "slice":
        for name, vslice, spec in (
            ("linear", sc.slice_linear, sc.slice_spectrum_linear),
            ("log", sc.slice_log, sc.slice_spectrum_log),
        ):
            t = sc.combined_map.time_axis
            path = fileio.write_csv_series(t, vslice.values, p(f"slice_{name}.csv"))
            bundle.add(path, f"velocity slice at {vslice.slice_velocity:.6g} m/s, {name}")
            path = fileio.write_csv_series(
                spec.frequencies, spec.magnitude_db, p(f"slice_spectrum_{name}.csv"), x_name="f"
            )
            bundle.add(path, f"velocity slice spectrum, {name} (dB)")
    elif stage == "estimate":
        bundle.estimates = sc.estimates()
        path = p("estimates.txt")
        fileio.write_text(path, format_estimates(bundle.estimates))
        bundle.add(path, "rate estimates")
    else:
        raise ValueError(f"unknown stage {stage!r}")


def run_scenario(cfg, stages=STAGES, figures=False, output_dir=None):
    """Run ``stages`` for ``cfg`` and write their files under the output directory.

    Returns the :class:`OutputBundle` listing every file written, in order.
    """
    out = Path(cfg.output_dir if output_dir is None else output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineError("output", exc) from exc
    bundle = OutputBundle(out, run_parameters=config_to_text(cfg))
    sc = Scenario(cfg)

    path = bundle.path("run_parameters.txt")
    fileio.write_text(path, bundle.run_parameters)
    bundle.add(path, "resolved configuration")
    for stage in stages:
        try:
            _write_stage(stage, sc, bundle)
        except (VitalDopplerError, OSError, FloatingPointError) as exc:
            if isinstance(exc, PipelineError):
                raise
            raise PipelineError(stage, exc) from exc
    if figures:
        try:
            from .plotting import render_figures

            for path, role in render_figures(sc, stages, out / "figures"):
                bundle.add(path, role)
        except (VitalDopplerError, OSError) as exc:
            raise PipelineError("figures", exc) from exc

    path = bundle.path("manifest.csv")
    bundle.add(path, "manifest")
    lines = ["file,role\n"] + [f"{f},{r.replace(',', ';')}\n" for f, r in bundle.manifest]
    fileio.write_text(path, "".join(lines))
    return bundle

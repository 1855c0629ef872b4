"""Exit criteria for the simulation study, each at its stated tolerance."""

import filecmp

import numpy as np
import pytest

from vitaldoppler import (
    PhaseSeries,
    ScattererMagnitudes,
    dft,
    estimate_rates,
    extract_phase,
    harmonic_group_score,
    two_point_signal,
    unwrap_phase,
)
from vitaldoppler.cli import main
from vitaldoppler.rates import EstimateSource
from vitaldoppler.slices import detect_impulses

from oracles import direct_dft, exhaustive_unwrap

BIN_TOL_HZ = 0.02


def test_1_single_point_recovery(single_point_scenario, acceptance):
    sc = single_point_scenario
    lam = sc.cfg.radar.wavelength
    truth = 4 * np.pi / lam * (sc.respiration.samples + sc.heartbeat.samples)
    residual = sc.unwrapped_phase.values - truth
    spread = float(np.ptp(residual))
    acceptance(1, "single-point phase recovery", len(residual) == 7200 and spread <= 1e-9,
               f"residual spread {spread:.3e} rad over {len(residual)} samples (<= 1e-9)")


def test_2_joint_estimation_single_point(single_point_scenario, acceptance):
    est = estimate_rates(single_point_scenario.phase_spectrum, single_point_scenario.cfg.estimation)
    ok = (
        est.respiration_hz is not None and abs(est.respiration_hz - 0.2) <= BIN_TOL_HZ
        and est.heart_hz is not None and abs(est.heart_hz - 1.1) <= BIN_TOL_HZ
    )
    acceptance(2, "joint estimation from single-point phase spectrum", ok,
               f"respiration {est.respiration_hz} Hz, heart {est.heart_hz} Hz (+-{BIN_TOL_HZ})")


def test_3_heart_suppression_two_point(two_point_scenario, single_point_scenario, acceptance):
    tp, sp = two_point_scenario.phase_spectrum, single_point_scenario.phase_spectrum
    drop = sp.at(1.1) - tp.at(1.1)
    est = estimate_rates(tp, two_point_scenario.cfg.estimation)
    resp_ok = est.respiration_hz is not None and abs(est.respiration_hz - 0.2) <= BIN_TOL_HZ
    acceptance(3, "heart suppression in two-point phase spectrum", drop >= 6.0 and resp_ok,
               f"1.1 Hz bin {drop:.2f} dB below single-point (>= 6), "
               f"respiration {est.respiration_hz} Hz")


def test_4_limit_behaviour(two_point_scenario, acceptance):
    sc = two_point_scenario
    mags = ScattererMagnitudes(xr=1.0, xh=10 ** (-60 / 20))
    sig = two_point_signal(sc.respiration, sc.heartbeat, mags, sc.cfg.radar)
    phase = unwrap_phase(extract_phase(sig)).values
    dev = phase - 4 * np.pi / sc.cfg.radar.wavelength * sc.respiration.samples
    dev -= 2 * np.pi * np.round(dev[0] / (2 * np.pi))  # same 2*pi branch as the reference
    worst = float(np.abs(dev).max())
    acceptance(4, "two-point phase limit at -60 dB", worst <= 2e-3,
               f"max deviation {worst:.3e} rad (<= 2e-3)")


def test_5_slice_recovery(two_point_scenario, acceptance):
    sc = two_point_scenario
    est = estimate_rates(sc.slice_spectrum_log, sc.cfg.estimation, EstimateSource.SLICE_SPECTRUM)
    k_max = sc.cfg.estimation.k_max
    log_score = harmonic_group_score(sc.slice_spectrum_log, 1.1, k_max).score
    lin_score = harmonic_group_score(sc.slice_spectrum_linear, 1.1, k_max).score
    heart_ok = est.heart_hz is not None and abs(est.heart_hz - 1.1) <= BIN_TOL_HZ
    # uncompressed slice: strongest non-DC line is a respiration harmonic
    lin = sc.slice_spectrum_linear
    top = lin.frequencies[1 + int(np.argmax(lin.magnitude_db[1:]))]
    resp_dominant = abs(top - 0.2 * max(1, round(top / 0.2))) <= lin.resolution
    acceptance(5, "heart rate from log-compressed velocity slice",
               heart_ok and log_score > lin_score and resp_dominant,
               f"slice {sc.slice_linear.slice_velocity * 100:.3f} cm/s, heart {est.heart_hz:.4f} Hz; "
               f"score log {log_score:.3e} > linear {lin_score:.3e}; "
               f"linear slice top line {top:.3f} Hz")


def test_6_heart_impulse_periodicity(two_point_scenario, acceptance):
    times = detect_impulses(two_point_scenario.heartbeat_map)
    spacing = float(np.median(np.diff(times)))
    ok = 65 <= len(times) <= 66 and abs(spacing - 0.909) <= 0.017
    acceptance(6, "heartbeat impulse periodicity", ok,
               f"{len(times)} impulses (65-66), median spacing {spacing:.4f} s (0.909 +- 0.017)")


def test_7_oracle_suites(acceptance):
    rng = np.random.default_rng(7)
    dft_err = 0.0
    for _ in range(100):
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        ref = np.array(direct_dft(x.tolist()))
        dft_err = max(dft_err, np.max(np.abs(dft(x, 16) - ref)) / np.max(np.abs(ref)))
    parseval_err = 0.0
    for _ in range(100):
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        X = dft(x, 16)
        e_time, e_freq = np.sum(np.abs(x) ** 2), np.sum(np.abs(X) ** 2) / 16
        parseval_err = max(parseval_err, abs(e_time - e_freq) / e_time)
    unwrap_exact = 0
    for _ in range(1000):
        x = rng.uniform(-np.pi, np.pi, int(rng.integers(2, 64)))
        got = unwrap_phase(PhaseSeries(x, 120.0)).values.tolist()
        unwrap_exact += got == exhaustive_unwrap(x.tolist())
    ok = dft_err <= 1e-10 and parseval_err <= 1e-9 and unwrap_exact == 1000
    acceptance(7, "oracle suites", ok,
               f"dft rel err {dft_err:.2e} (<= 1e-10), Parseval rel err {parseval_err:.2e} "
               f"(<= 1e-9), unwrap exact {unwrap_exact}/1000")


@pytest.mark.slow
def test_8_reproducibility(tmp_path, acceptance):
    dirs = [tmp_path / "run1", tmp_path / "run2"]
    codes = [main(["scenario", "--output-dir", str(d)]) for d in dirs]
    csvs = sorted(p.name for p in dirs[0].glob("*.csv"))
    match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], csvs, shallow=False)
    ok = codes == [0, 0] and len(csvs) >= 14 and not mismatch and not errors
    acceptance(8, "byte-identical scenario CSV outputs", ok,
               f"{len(match)}/{len(csvs)} CSV files identical across two default runs")

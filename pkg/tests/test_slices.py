import numpy as np
import pytest

from vitaldoppler import (
    BasebandSignal,
    ContractError,
    VelocityRangeError,
    extract_slice,
    harmonic_group_score,
    log_compress,
    slice_spectrum,
    velocity_time_map,
)
from vitaldoppler.slices import VelocitySlice, detect_impulses, velocity_bin
from vitaldoppler.spectral import FLOOR_DB


@pytest.fixture(scope="module")
def static_map(radar):
    return velocity_time_map(BasebandSignal(np.ones(120), 120), radar, 12)


def _slice(values, sr=120.0):
    return VelocitySlice(np.asarray(values, dtype=float), 0.1, 0.1, sr)


class TestExtractSlice:
    def test_zero_velocity_on_static_target(self, static_map):
        s = extract_slice(static_map, 0.0)
        assert s.slice_velocity == 0.0
        assert np.all(s.values > 0) and np.ptp(s.values) < 1e-12 * s.values.max()
        assert s.sample_rate == pytest.approx(120.0)

    def test_bin_center_from_grid_arithmetic(self, two_point_scenario, radar):
        spacing = (radar.wavelength / 2) * 120 / 256
        expected = round(0.147 / spacing) * spacing
        s = two_point_scenario.slice_linear
        assert s.slice_velocity == pytest.approx(expected, rel=1e-12)
        assert s.slice_velocity == pytest.approx(0.147554100421875, rel=1e-12)
        assert abs(s.slice_velocity - s.requested_velocity) <= spacing / 2

    def test_out_of_span(self, static_map):
        with pytest.raises(VelocityRangeError) as err:
            extract_slice(static_map, 10.0)
        lo, hi = err.value.span
        assert lo == pytest.approx(-0.1487, abs=1e-3) and hi == pytest.approx(0.1499, abs=1e-3)

    def test_reselection_is_idempotent(self, two_point_scenario):
        vmap = two_point_scenario.combined_map
        first = extract_slice(vmap, 0.147)
        again = extract_slice(vmap, first.slice_velocity)
        assert again.slice_velocity == first.slice_velocity
        assert again.values.tobytes() == first.values.tobytes()

    def test_compressed_slice_equals_map_row(self, two_point_scenario):
        vmap = two_point_scenario.combined_map
        s = log_compress(extract_slice(vmap, 0.147))
        row = velocity_bin(vmap, 0.147)
        assert s.values.tobytes() == vmap.magnitude_db[row].tobytes()


class TestLogCompress:
    def test_unit(self):
        out = log_compress(_slice(np.ones(4)))
        np.testing.assert_allclose(out.values, 0.0, atol=1e-10)
        assert out.compressed

    def test_decade(self):
        np.testing.assert_allclose(log_compress(_slice([1.0, 10.0])).values, [0.0, 20.0], atol=1e-10)

    def test_monotone(self, rng):
        x = np.sort(rng.uniform(0, 5, 100))
        assert np.all(np.diff(log_compress(_slice(x)).values) > 0)

    def test_twice_is_contract_error(self):
        with pytest.raises(ContractError):
            log_compress(log_compress(_slice([1.0, 2.0])))


class TestSliceSpectrum:
    def test_constant_is_floor(self):
        spec = slice_spectrum(_slice(np.full(50, 1.0)))
        np.testing.assert_array_equal(spec.magnitude_db, FLOOR_DB)

    def test_scale_only_moves_dc(self, rng):
        base = _slice(rng.uniform(1.0, 10.0, 720))
        scaled = _slice(base.values * 10.0)
        a = slice_spectrum(log_compress(base)).magnitude_db
        b = slice_spectrum(log_compress(scaled)).magnitude_db
        np.testing.assert_allclose(a[1:], b[1:], rtol=0, atol=1e-6)

    def test_scale_on_default_slice_within_eps_effect(self, two_point_scenario):
        base = two_point_scenario.slice_linear
        g = 10.0
        scaled = VelocitySlice(base.values * g, base.slice_velocity, base.requested_velocity,
                               base.sample_rate)
        la, lb = log_compress(base).values, log_compress(scaled).values
        # the eps term makes the shift differ from 20 log10(g) per sample
        delta = lb - la - 20 * np.log10(g)
        bound = np.abs(delta - delta.mean()).sum() + 1e-9
        xa = np.fft.rfft(la - la.mean())
        xb = np.fft.rfft(lb - lb.mean())
        assert np.max(np.abs(np.abs(xa[1:]) - np.abs(xb[1:]))) <= bound

    def test_linear_slice_dominated_by_respiration(self, two_point_scenario):
        spec = two_point_scenario.slice_spectrum_linear
        i = 1 + int(np.argmax(spec.magnitude_db[1:]))
        f = spec.frequencies[i]
        k = round(f / 0.2)
        assert k >= 1 and abs(f - 0.2 * k) <= spec.resolution

    def test_compression_raises_heart_group_score(self, two_point_scenario):
        lin = harmonic_group_score(two_point_scenario.slice_spectrum_linear, 1.1, 4)
        log = harmonic_group_score(two_point_scenario.slice_spectrum_log, 1.1, 4)
        assert log.score > lin.score


class TestImpulses:
    def test_heartbeat_impulses(self, two_point_scenario):
        times = detect_impulses(two_point_scenario.heartbeat_map)
        assert 65 <= len(times) <= 66
        assert np.median(np.diff(times)) == pytest.approx(1 / 1.1, abs=2 / 120)

    def test_static_has_none(self, static_map):
        assert len(detect_impulses(static_map)) == 0

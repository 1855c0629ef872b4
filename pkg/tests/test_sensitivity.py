"""H-R ratio read as amplitude dB (default) vs power dB: conclusions must not flip."""

import pytest

from vitaldoppler.config import build_config
from vitaldoppler.pipeline import Scenario


@pytest.mark.parametrize("hr_ratio_db", [-10.0, -20.0])  # -10 dB power == -20 dB amplitude
def test_conclusions_hold_under_both_readings(hr_ratio_db):
    est = Scenario(build_config({"hr_ratio_db": hr_ratio_db})).estimates()
    assert est["phase.respiration_hz"] == pytest.approx(0.2, abs=0.02)
    assert est["phase.heart_bin_vs_single_point_db"] <= -6.0
    assert est["slice_log.heart_hz"] == pytest.approx(1.1, abs=0.02)


def test_suppression_deepens_as_heart_scatterer_weakens():
    drops = [
        Scenario(build_config({"hr_ratio_db": r})).estimates()["phase.heart_bin_vs_single_point_db"]
        for r in (-10.0, -20.0, -30.0)
    ]
    assert drops[0] > drops[1] > drops[2]

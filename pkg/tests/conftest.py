import numpy as np
import pytest

from vitaldoppler import (
    RadarConfig,
    ScattererMagnitudes,
    VitalSignParams,
    single_point_signal,
    synth_heartbeat,
    synth_respiration,
    two_point_signal,
)
from vitaldoppler.config import ScenarioConfig
from vitaldoppler.pipeline import Scenario
from vitaldoppler.signal_model import ScattererModel


@pytest.fixture(scope="session")
def radar():
    return RadarConfig()


@pytest.fixture(scope="session")
def vitals():
    return VitalSignParams()


@pytest.fixture(scope="session")
def traces(radar, vitals):
    return synth_respiration(vitals, radar), synth_heartbeat(vitals, radar)


@pytest.fixture(scope="session")
def single_point(traces, vitals, radar):
    rb, rh = traces
    return single_point_signal(rb, rh, ScattererMagnitudes.from_params(vitals), radar)


@pytest.fixture(scope="session")
def two_point(traces, vitals, radar):
    rb, rh = traces
    return two_point_signal(rb, rh, ScattererMagnitudes.from_params(vitals), radar)


@pytest.fixture(scope="session")
def two_point_scenario():
    return Scenario(ScenarioConfig(model=ScattererModel.TWO_POINT))


@pytest.fixture(scope="session")
def single_point_scenario():
    return Scenario(ScenarioConfig(model=ScattererModel.SINGLE_POINT))


@pytest.fixture
def rng():
    return np.random.default_rng(20191016)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; printed in the summary."""

    def record(number, title, passed, detail):
        ACCEPTANCE_LINES.append((number, f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}"))
        assert passed, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

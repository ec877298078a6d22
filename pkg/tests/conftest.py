import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cesarolab.circle import PCFunction

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_pc(rng: np.random.Generator, level: int = 6, complex_values: bool = False) -> PCFunction:
    v = rng.standard_normal(2**level)
    if complex_values:
        v = v + 1j * rng.standard_normal(2**level)
    return PCFunction(level, v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def half_indicator():
    """Indicator of ``[0, pi)``."""
    return PCFunction.indicator(0.0, np.pi, 4)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number: int, title: str, passed: bool, seconds: float, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d} {status}  {title} ({seconds:.1f} s) {detail}".rstrip()
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

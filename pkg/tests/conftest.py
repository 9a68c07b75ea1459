import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "lab", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lab")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion():
    """record(k, ok, detail) stores one acceptance line for the terminal summary."""

    def record(k: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append((k, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

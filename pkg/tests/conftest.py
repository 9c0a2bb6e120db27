import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("FORMCLASS_CACHE_DIR", str(tmp_path / "cache"))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record and print one PASS/FAIL line, then assert."""

    def record(n: int, ok: bool, msg: str) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {msg}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import pytest

from thermophase import ModelConfig

_acceptance_lines = []


@pytest.fixture
def config():
    return ModelConfig()


@pytest.fixture
def criterion():
    """Record one acceptance line and assert it."""

    def record(label, passed, detail):
        _acceptance_lines.append(f"{label}: {'PASS' if passed else 'FAIL'}  {detail}")
        assert passed, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

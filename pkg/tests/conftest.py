import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_complex(rng, *shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one ``AC<n> PASS/FAIL`` line; shown again in the terminal summary."""

    def _report(label: str, ok: bool, detail: str) -> None:
        line = f"{label} {'PASS' if ok else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)

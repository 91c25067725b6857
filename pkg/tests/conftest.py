import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    for mod in list(sys.modules.values()):
        lines = getattr(mod, "ACCEPTANCE_LINES", None)
        if isinstance(lines, dict) and lines:
            terminalreporter.section("acceptance criteria")
            for number in sorted(lines):
                terminalreporter.write_line(lines[number])
            break

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from grainforge.instances import ToySpec, make_toy  # noqa: E402


@pytest.fixture(scope="session")
def toy():
    return make_toy(ToySpec(8, 6, 8, 8, "h2", "h5", 5, p1=2))


@pytest.fixture(scope="session")
def toy16():
    return make_toy(ToySpec(16, 8, 16, 16, "h4", "h5", 1, p1=2))


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[k])

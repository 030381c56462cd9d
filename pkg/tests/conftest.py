import math

import pytest

from wtqsim.network import reduce
from wtqsim.params import DEFAULT_BIAS, DESIGN_CIRCUIT


@pytest.fixture(scope="session")
def design():
    return DESIGN_CIRCUIT


@pytest.fixture(scope="session")
def design_net():
    return reduce(DESIGN_CIRCUIT, DEFAULT_BIAS)


@pytest.fixture(scope="session")
def two_pi():
    return 2.0 * math.pi


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""
    log = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
        log.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

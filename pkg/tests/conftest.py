import numpy as np
import pytest

from swsim import RATE_HALF_IRREGULAR, build_code, load_config
from swsim.cli import get_code

# Filled by the acceptance tests; echoed after the run so the one-line
# verdicts are visible even with output capture on.
ACCEPTANCE_RESULTS = []


def record_criterion(number: int, name: str, ok: bool, detail: str = ""):
    line = f"criterion {number:>2} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria summary")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line("  " + line)


@pytest.fixture(scope="session")
def default_config():
    return load_config(None)


@pytest.fixture(scope="session")
def big_code(default_config):
    """The benchmark n=10^4 rate-1/2 code, via the on-disk alist cache."""
    return get_code(default_config)


@pytest.fixture(scope="session")
def small_code():
    """Same degree distribution at n=1200 for fast end-to-end tests."""
    return build_code(RATE_HALF_IRREGULAR, 1200, 1)


@pytest.fixture()
def rng():
    return np.random.default_rng(7)

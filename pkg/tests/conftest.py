import mpmath
import pytest

from torusrot.circlemap import build_denjoy
from torusrot.numeric import golden, silver


def golden_oracle(dps=50):
    with mpmath.workdps(dps):
        return (mpmath.sqrt(5) - 1) / 2


def silver_oracle(dps=50):
    with mpmath.workdps(dps):
        return mpmath.sqrt(2) - 1


@pytest.fixture(scope="session")
def gold():
    return golden()


@pytest.fixture(scope="session")
def silv():
    return silver()


@pytest.fixture(scope="session")
def model(gold):
    return build_denjoy(gold)


@pytest.fixture(scope="session")
def small_model():
    """q = 233; same K, fast to build."""
    return build_denjoy(golden(12))


# acceptance criteria record their verdicts here; printed at the end of the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])

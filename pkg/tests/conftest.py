import warnings

import pytest
from hypothesis import HealthCheck, settings

from hyperverify.errors import DegenerateParameterWarning

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet_degenerate():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        yield


@pytest.fixture(scope="session")
def catalog_reports():
    """Every catalog case on its shipped default plan, run once per session."""
    from hyperverify.identities import CATALOG, run_cases
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        return {r.case_id: r for r in run_cases(list(CATALOG))}


# ---- acceptance summary ----------------------------------------------------------

N_CRITERIA = 10


def pytest_configure(config):
    config.acceptance_lines = {}


@pytest.fixture
def criterion(request):
    """record(n, ok, detail) stores one summary line for acceptance criterion n."""
    def record(n, ok, detail=""):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        terminalreporter.write_line(lines.get(n, f"criterion {n:>2}: FAIL  (not reached)"))

import pathlib

import pytest
from hypothesis import HealthCheck, settings

from kothe.spaces import INFINITE_TYPE, FINITE_TYPE, KotheMatrix

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def inf_linear():
    return KotheMatrix.power_series(INFINITE_TYPE, n_max=30, k_max=5, rule="linear", slope=1.0)


@pytest.fixture
def fin_linear():
    return KotheMatrix.power_series(FINITE_TYPE, n_max=30, k_max=5, rule="linear", slope=1.0)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call":
                continue
            props = dict(report.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status, detail in sorted(lines):
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{status}  {number:>2}. {title}{suffix}")

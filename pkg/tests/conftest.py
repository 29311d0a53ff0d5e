import pytest
from hypothesis import HealthCheck, settings, strategies as st

from juntabound.boolfn import BooleanFunction

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def functions(draw, min_arity=0, max_arity=4):
    n = draw(st.integers(min_arity, max_arity))
    return BooleanFunction(n, draw(st.integers(0, (1 << (1 << n)) - 1)))


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance_line(request):
    """Record one pass/fail line; the lines are printed in the terminal summary."""

    def emit(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

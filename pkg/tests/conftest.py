import mpmath
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(autouse=True)
def _fresh_mp_context():
    # every test starts from mpmath's stock 53-bit context
    mpmath.mp.prec = 53
    yield
    mpmath.mp.prec = 53


@pytest.fixture
def report(request):
    """Record one acceptance line; all lines are repeated in the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def emit(line: str):
        print(line)
        lines.append(line)

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

import numpy as np
import pytest

from susyosc import make_transform, params_from_k

# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[0.75, 1.2, 2.5], ids=lambda k: f"k={k}")
def params(request):
    return params_from_k(request.param)


@pytest.fixture
def exact_spec():
    return make_transform(params_from_k(1.25, 12), "U", 0)


@pytest.fixture
def broken_spec():
    return make_transform(params_from_k(1.25, 12), "V", 1)

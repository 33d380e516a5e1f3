import numpy as np
import pytest
from hypothesis import settings, strategies as st

from tfgkp.functions import FREQUENCY, GridFunction

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")

N = 2048
SPAN = 80.0

shift = st.floats(-5.0, 5.0, allow_nan=False)


@st.composite
def grid_functions(draw, n=N, span=SPAN):
    """Random Gaussian or Lorentzian bump with a carrier, sampled on a grid."""
    kind = draw(st.sampled_from(["gaussian", "lorentzian"]))
    c = draw(st.floats(-3.0, 3.0))
    w = draw(st.floats(0.5, 2.0))
    k = draw(st.floats(-2.0, 2.0))
    amp = draw(st.floats(0.2, 3.0)) * np.exp(1j * draw(st.floats(0, 2 * np.pi)))

    def f(x):
        if kind == "gaussian":
            env = np.exp(-((x - c) ** 2) / (2 * w * w))
        else:
            env = w / (w - 1j * (x - c))
        return amp * env * np.exp(1j * k * x)

    step = span / n
    return GridFunction.from_callable(f, -span / 2, step, n, FREQUENCY)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

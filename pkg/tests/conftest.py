import numpy as np
import pytest
from hypothesis import strategies as st

from kerrcat import SchemeConfig, SingleModeState

finite = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False, allow_infinity=False)
amplitudes = st.builds(complex, finite, finite)
coefficients = st.builds(
    complex,
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
)


def random_state(rng, n_terms, max_amp=4.0):
    """Random superposition with amplitudes uniform in the disk |a| <= max_amp."""
    amps = max_amp * np.sqrt(rng.random(n_terms)) * np.exp(2j * np.pi * rng.random(n_terms))
    coeffs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return SingleModeState.from_terms(zip(coeffs, amps))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def paper_config():
    return SchemeConfig(7.23, 5, (3, 4))


ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

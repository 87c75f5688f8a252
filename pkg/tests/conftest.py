import warnings

import numpy as np
import pytest
from hypothesis import strategies as st

from qfridge.model import CouplingSpec, QubitSpec, build_model, canonical_model

from oracles import ACCEPTANCE_LINES, D_NAMES, draw_model


@st.composite
def models(draw, equal_temps=False):
    e1 = draw(st.floats(1.0, 5.0))
    e3 = draw(st.floats(5.0, 15.0))
    if equal_temps:
        temps = [draw(st.floats(20.0, 500.0))] * 3
    else:
        temps = sorted(draw(st.lists(st.floats(20.0, 500.0), min_size=3, max_size=3)))
    gammas = draw(st.lists(st.floats(1e-4, 1e-2), min_size=3, max_size=3))
    g_tilde = draw(st.floats(1e-3, 5e-2))
    d = {k: draw(st.floats(-0.05, 0.05)) for k in D_NAMES}
    qubits = [QubitSpec(e, g, t) for e, g, t in zip((e1, e1 + e3, e3), gammas, temps)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_model(qubits, CouplingSpec(g_tilde=g_tilde, **d))


@pytest.fixture
def canonical():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return canonical_model()


@pytest.fixture(scope="session")
def random_models():
    rng = np.random.default_rng(20240611)
    return [draw_model(rng) for _ in range(100)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda ln: int(ln.split()[1])):
            terminalreporter.write_line(line)

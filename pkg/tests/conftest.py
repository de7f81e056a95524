import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qig.models import make_model

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BUILTIN = {
    "spin-z": {},
    "spin-xz": {"omega_x": 1.0},
    "flux-qubit": {"Delta": 1.0},
}

betas = st.floats(0.1, 5.0)
fields = st.floats(-2.0, 2.0)
positive_fields = st.floats(0.1, 5.0)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(params=list(BUILTIN))
def model(request):
    return make_model(request.param, BUILTIN[request.param])


@pytest.fixture
def flux():
    return make_model("flux-qubit", Delta=1.0)


@pytest.fixture
def spin_z():
    return make_model("spin-z")


@pytest.fixture
def spin_xz():
    return make_model("spin-xz", omega_x=1.0)


def h_range(name):
    return (0.1, 5.0) if name == "spin-z" else (-2.0, 2.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

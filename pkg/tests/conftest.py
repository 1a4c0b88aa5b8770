import sys
import numpy as np
import pytest
from hypothesis import settings

from greedyboost import LossSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ALL_LOSSES = [
    LossSpec("logistic"),
    LossSpec("exponential"),
    LossSpec("least_squares"),
    LossSpec("modified_least_squares"),
    LossSpec("p_norm", p=3.0),
]


@pytest.fixture(params=ALL_LOSSES, ids=lambda s: s.name)
def loss(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])

import numpy as np
import pytest
from hypothesis import settings

from heisenvelope import make_constant, make_trig_poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


PRESETS = {
    "constant2": lambda: make_constant(2.0),
    "two_plus_cos": lambda: make_trig_poly(2.0, [(1.0, 0.0)]),
    "mixed": lambda: make_trig_poly(1.0, [(0.0, 0.0), (0.5, 0.0), (0.0, 0.25)]),
}


@pytest.fixture(params=sorted(PRESETS))
def preset(request):
    return request.param, PRESETS[request.param]()


@pytest.fixture(autouse=True)
def _no_tol_override(monkeypatch):
    monkeypatch.delenv("ENVELOPE_TOL_OVERRIDE", raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)

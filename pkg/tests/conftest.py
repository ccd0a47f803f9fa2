import os

import hypothesis
import numpy as np
import pytest

from outer_billiards.bodies import BodySpec, constant_width_2d, unit_circle

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ELLIPSE = {"kind": "ellipsoid", "semi_axes": [1.0, 0.6]}
ELLIPSOID_4D = {"kind": "ellipsoid", "semi_axes": [1.0, 0.8, 1.2, 0.9]}

CATALOG = {
    "circle": {"kind": "ellipsoid", "semi_axes": [1.0, 1.0]},
    "ellipse": ELLIPSE,
    "ellipse_gauge": {**ELLIPSE, "representation": "gauge"},
    "constant_width": {"kind": "constant_width_2d", "eps": 0.1},
    "ellipsoid_4d": ELLIPSOID_4D,
    "pball": {"kind": "pball", "p": 1.5},
    "harmonic": {"kind": "support_harmonic", "eps": 0.1, "mode": 3},
    "harmonic_4d": {"kind": "support_harmonic", "eps": 0.05, "mode": 2, "d": 2},
}

# acceptance outcomes, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def build(name):
    return BodySpec.from_dict(CATALOG[name]).build()


@pytest.fixture(params=sorted(CATALOG))
def any_body(request):
    return build(request.param)


@pytest.fixture
def circle():
    return unit_circle()


@pytest.fixture
def ellipse():
    return build("ellipse")


@pytest.fixture
def cw():
    return constant_width_2d(0.1)


@pytest.fixture
def ellipsoid4():
    return build("ellipsoid_4d")


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

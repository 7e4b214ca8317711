import numpy as np
import pytest
from fractions import Fraction

from finite_observers import FrameSpec, Lattice, PhysConstants


@pytest.fixture
def frame_s():
    """Observer s (mass 2) describing particle i (mass 1) and observer s' (mass 3)."""
    return FrameSpec.create("s", 2, {"i": 1, "s'": 3})


@pytest.fixture
def lattice_s(frame_s):
    return Lattice.for_frame(frame_s)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def two_body_frame(ratio_i, ratio_j=None, observer_mass=1):
    """Frame with bodies i, j whose mass ratios to the observer are given."""
    ratio_j = ratio_i if ratio_j is None else ratio_j
    m = Fraction(observer_mass)
    return FrameSpec.create("s", m, {"i": Fraction(ratio_i) * m, "j": Fraction(ratio_j) * m})


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])

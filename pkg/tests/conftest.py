import numpy as np
import pytest
from hypothesis import settings

from chiralfriction import TransitionDipole

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ref_kin():
    from chiralfriction import AtomKinematics

    return AtomKinematics(omega0=0.1, d=0.1, v=0.05)


DIPOLES = {
    "x": TransitionDipole.linear("x"),
    "y": TransitionDipole.linear("y"),
    "z": TransitionDipole.linear("z"),
    "chiral+": TransitionDipole.chiral(1),
    "chiral-": TransitionDipole.chiral(-1),
}


def dipole_from(parts):
    comps = np.array(parts[:3]) + 1j * np.array(parts[3:])
    return TransitionDipole(*(comps / np.linalg.norm(comps)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])

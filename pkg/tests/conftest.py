import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mopcd.weights import DiscreteAtoms, GaussianDrift, WeightSystem  # noqa: E402

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

ATOMS3 = [[(0, 1), (1, 1), (2, 1)], [(0, 1), (1, 2), (2, 4)]]
ATOMS6 = [[(i, 1) for i in range(6)], [(i, 2 ** i) for i in range(6)]]

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE = {}


def atoms_system(spec):
    return WeightSystem([DiscreteAtoms([(Fraction(x), Fraction(w)) for x, w in at])
                         for at in spec], scalar_mode="exact")


@pytest.fixture(scope="session")
def hermite2():
    return WeightSystem([GaussianDrift(1), GaussianDrift(-1)])


@pytest.fixture(scope="session")
def hermite3():
    return WeightSystem([GaussianDrift(-1), GaussianDrift(0), GaussianDrift(1)])


@pytest.fixture(scope="session")
def atoms3():
    return atoms_system(ATOMS3)


@pytest.fixture(scope="session")
def atoms6():
    return atoms_system(ATOMS6)


@pytest.fixture(scope="session")
def configs():
    return CONFIGS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")

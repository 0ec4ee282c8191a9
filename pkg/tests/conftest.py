from fractions import Fraction

import numpy as np
import pytest

from scmarginal.experiments import GENERIC_CONDITIONALS
from scmarginal.merge import build_merge_problem, observations_from_joint

# Cause marginals used for the generic-conditionals instance in geometry tests.
GENERIC_PX = Fraction(1, 4)
GENERIC_PY = Fraction(1, 4)

ACCEPTANCE_LINES: list[str] = []


def random_joint(rng: np.random.Generator, denominator: int = 1000):
    """Random joint-form parameters on a coarse rational grid."""
    draw = lambda lo: Fraction(int(rng.integers(lo, denominator + 1 - lo)), denominator)
    return draw(1), draw(1), tuple(draw(0) for _ in range(4))


def random_observations(seed: int, denominator: int = 1000):
    rng = np.random.default_rng(seed)
    tx, ty, tz = random_joint(rng, denominator)
    return observations_from_joint(tx, ty, tz)


@pytest.fixture
def generic_problem():
    return build_merge_problem(*observations_from_joint(GENERIC_PX, GENERIC_PY, GENERIC_CONDITIONALS))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

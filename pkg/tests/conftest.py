import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest
from scipy.stats import special_ortho_group

from src.core.isometry import Isometry
from src.groups import fixtures
from src.groups.enumeration import enumerate_ball


def random_isometry(rng: np.random.Generator, n: int, scale: float = 3.0) -> Isometry:
    ort = special_ortho_group.rvs(n, random_state=rng) if n > 1 else np.array([[1.0]])
    if rng.random() < 0.5:
        # flip one axis to hit the other component of O(n)
        ort = ort @ np.diag([-1.0] + [1.0] * (n - 1))
    return Isometry(ort, scale * rng.standard_normal(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def z2_ball():
    return enumerate_ball(fixtures.z_lattice(2), 64)


@pytest.fixture(scope="session")
def screw_ball():
    return enumerate_ball(fixtures.screw_group(1.0), 64)


@pytest.fixture(scope="session")
def glide_ball():
    return enumerate_ball(fixtures.glide_group(), 80)


@pytest.fixture(scope="session")
def screw_r4_ball():
    return enumerate_ball(fixtures.screw_r4(1.0), 50)

import math

import pytest

from qladder.families import make_family, reference_params
from qladder.qkernel import QBase

REFERENCE_Q = 0.5

FAMILY_NAMES = (
    "asc1",
    "asc2",
    "big_q_jacobi",
    "q_dual_hahn",
    "askey_wilson",
    "continuous_q_hermite",
)


@pytest.fixture(scope="session")
def base():
    return QBase(REFERENCE_Q)


@pytest.fixture(scope="session")
def families(base):
    """All six families at the reference parameter sets (shared; FamilySpec
    caches are read-mostly and tests must not mutate them)."""
    return {name: make_family(name, reference_params(name), base) for name in FAMILY_NAMES}


def grid_for(name, count=5):
    """Default nondegenerate check grids (s-chain anchors, theta points)."""
    if name in ("asc1", "asc2", "big_q_jacobi"):
        return [0.25 + k for k in range(count)]
    if name == "q_dual_hahn":
        return [0.3 + k for k in range(count)]
    lnq = math.log(REFERENCE_Q)
    return [complex(0.0, 1.0) * ((j + 0.5) * math.pi / (count + 1)) / lnq for j in range(count)]

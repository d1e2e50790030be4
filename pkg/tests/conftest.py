import numpy as np
import pytest

from bellkit.linalg import DensityOperator, PureState


@pytest.fixture(scope="session")
def singlet() -> PureState:
    v = np.zeros(4, dtype=complex)
    v[1] = 1 / np.sqrt(2)
    v[2] = -1 / np.sqrt(2)
    return PureState(v)


@pytest.fixture(scope="session")
def singlet_density(singlet) -> DensityOperator:
    return singlet.density()

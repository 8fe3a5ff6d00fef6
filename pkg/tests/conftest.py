import pytest

from src.config.models import RunConfig
from src.services.boolean_algebra import FiniteBooleanAlgebra
from src.services.duality import KripkeFrame, of
from src.services.subordination import SubordinationAlgebra


@pytest.fixture
def two_atoms():
    return FiniteBooleanAlgebra(2)


@pytest.fixture
def order_algebra(two_atoms):
    return SubordinationAlgebra.order(two_atoms)


@pytest.fixture
def arrow_frame():
    return KripkeFrame.of_size(2, {(0, 1)})


@pytest.fixture
def arrow_algebra(arrow_frame):
    return of(arrow_frame)


@pytest.fixture
def config():
    return RunConfig(_env_file=None)

import pytest

from lsc.field import FieldParams
from lsc.layered import LayeredCode


@pytest.fixture(scope="session")
def fp24():
    return FieldParams.default(2, 4)


@pytest.fixture(scope="session")
def example_code(fp24):
    """The two-layer default code: distances 6 and 8, overall 6."""
    return LayeredCode.standard(fp24, [(3, 1), (4, 1)])


@pytest.fixture(scope="session")
def tiny_code():
    """Fully enumerable code: q=2, m=2, layers (2,1),(2,1); 16 codewords."""
    return LayeredCode.standard(FieldParams.default(2, 2), [(2, 1), (2, 1)])

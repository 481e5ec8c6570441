import pytest

from equichain.exact import RationalVector


def vec(*xs):
    return RationalVector.from_dense(xs)


@pytest.fixture
def v():
    return vec

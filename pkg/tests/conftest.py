import numpy as np
import pytest

from adec import FrameSpec, harmonic_spec


@pytest.fixture
def e1():
    """k = 1, eigenvalue 1, base vector [1]: the scalar exponential frame."""
    return lambda m: FrameSpec.from_eigen([1], [1], m)


@pytest.fixture
def h2():
    return lambda m: harmonic_spec([1, -1], m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

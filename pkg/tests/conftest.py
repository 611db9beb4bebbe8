import numpy as np
import pytest

from oxgrid.rng import make_stream


@pytest.fixture
def rng() -> np.random.Generator:
    """A fixed-seed stream so statistical tests are reproducible."""
    return make_stream(20240817)


def make_rng(seed: int) -> np.random.Generator:
    return make_stream(seed)

import numpy as np
import pytest

from qelicit.cli import example_mixture_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def rho_example():
    """The worked-example qubit state [[1/6, 1/6], [1/6, 5/6]]."""
    return example_mixture_state()

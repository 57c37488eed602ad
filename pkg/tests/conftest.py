import numpy as np
import pytest

from cfequiv.kernels import KernelSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def stable1():
    return KernelSpec("stable", 1.0)


@pytest.fixture
def stable2():
    return KernelSpec("stable", 2.0)


@pytest.fixture
def laplace1():
    return KernelSpec("laplace", 1.0)


ALL_SPECS = [
    KernelSpec("stable", 0.5),
    KernelSpec("stable", 1.0),
    KernelSpec("stable", 1.5),
    KernelSpec("stable", 2.0),
    KernelSpec("laplace", 0.1),
    KernelSpec("laplace", 0.25),
    KernelSpec("laplace", 1.0),
    KernelSpec("laplace", 4.0),
    KernelSpec("energy", 0.5),
    KernelSpec("energy", 1.0),
    KernelSpec("energy", 1.5),
    KernelSpec("energy", 2.0),
]

import numpy as np
import pytest

from bosegas import onedim


@pytest.fixture(scope="session")
def ll_curve():
    # built once per process; shared by every test that needs e(t)
    return onedim.default_curve()


@pytest.fixture()
def rng():
    return np.random.default_rng(987654)

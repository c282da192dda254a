import numpy as np
import pytest

from sjperc import ArrayEnvironment, DistributionSpec, EnvironmentConfig


def int_config(p=0.5, xi="bernoulli:0.5", eta="bernoulli:0.5"):
    return EnvironmentConfig(
        p, DistributionSpec.parse(xi), DistributionSpec.parse(eta), "integer"
    )


def real_config(p=0.5, xi="exp:1.0", eta="exp:1.0"):
    return EnvironmentConfig(
        p, DistributionSpec.parse(xi), DistributionSpec.parse(eta), "real"
    )


def unit_config(p=0.5):
    return int_config(p, "const:1", "const:1")


def array_env(switch, xi=None, eta=None, mode="integer"):
    switch = np.asarray(switch)
    if xi is None:
        xi = np.ones_like(switch)
    if eta is None:
        eta = np.ones_like(switch)
    return ArrayEnvironment(switch, xi, eta, mode)


@pytest.fixture
def rng():
    import random

    return random.Random(20260810)

import pytest
from hypothesis import HealthCheck, settings

from tropants.fixtures import lift_from_json, load
from tropants.periodic_av import QuasiPeriodicLift

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def genus2():
    return lift_from_json(load("genus2"))


@pytest.fixture(scope="session")
def node():
    return QuasiPeriodicLift.from_json(load("node"))


@pytest.fixture(scope="session")
def genus5():
    return QuasiPeriodicLift.from_json(load("genus5"))


@pytest.fixture(scope="session")
def genus5_a2():
    return QuasiPeriodicLift.from_json(load("genus5_a2"))

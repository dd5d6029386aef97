import pytest
from hypothesis import HealthCheck, settings

from services.fields import field_create

settings.register_profile(
    "canonix",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("canonix")


@pytest.fixture
def gf7():
    return field_create(7)


@pytest.fixture
def gf2():
    return field_create(2)


@pytest.fixture
def gf3():
    return field_create(3)


@pytest.fixture
def gf4():
    return field_create(2, 2)


@pytest.fixture
def gf9():
    return field_create(3, 2)

import pytest
from hypothesis import HealthCheck, settings
from mpmath import mp

settings.register_profile(
    "mp", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("mp")


@pytest.fixture(autouse=True)
def default_precision():
    # every test starts from the library default and may not leak changes
    with mp.workprec(320):
        yield

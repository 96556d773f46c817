import pytest

from conjcodes.builds import reference_21, reference_49


@pytest.fixture(scope="session")
def ref21():
    return reference_21()


@pytest.fixture(scope="session")
def ref49():
    return reference_49()

import pytest

from flatradon.spaces import load_catalog


@pytest.fixture(scope="session")
def catalog():
    return {s.name: s for s in load_catalog()}

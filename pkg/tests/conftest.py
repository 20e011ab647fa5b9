import pytest

from pswork.finset import fresh_workspace


@pytest.fixture(autouse=True)
def _isolated_workspace():
    """Every test runs with a brand-new id counter for reproducible ids."""
    with fresh_workspace():
        yield

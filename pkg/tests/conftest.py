import pytest

from wgkit.buchstab import constants_table
from wgkit.reference import K_RANGE


@pytest.fixture(scope="session")
def all_tables():
    """Constants tables for every k, computed once per session."""
    return {k: constants_table(k) for k in K_RANGE}

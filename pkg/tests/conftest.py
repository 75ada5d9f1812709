import pytest

from candyfix.engine import compute_tables


@pytest.fixture(scope="session")
def tables_k4():
    """The k=4 sweep is the expensive shared input; compute it once."""
    return compute_tables(4)

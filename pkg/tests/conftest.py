import pytest

from helpers import FIXTURES, run_fig1_pipeline


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture()
def fig1():
    """Golden table document built through the in-process pipeline."""
    return run_fig1_pipeline()

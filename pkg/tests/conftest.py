import pathlib

import pytest

REPO = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def scenario_dir() -> pathlib.Path:
    return REPO / "scenarios"

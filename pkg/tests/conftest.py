from pathlib import Path

import pytest

import helpers

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "appendix3"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def appendix_table():
    return helpers.appendix_table()


@pytest.fixture()
def appendix_bundle():
    return helpers.appendix_bundle()


@pytest.fixture()
def appendix_schedule():
    return helpers.appendix_schedule()

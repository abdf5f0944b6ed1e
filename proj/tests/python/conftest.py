import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def problems_dir():
    return pathlib.Path(os.environ.get("MPEC_CQ_PROBLEMS", ROOT / "problems"))

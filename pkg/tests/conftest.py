import json
from pathlib import Path

import pytest

ORACLE_PATH = Path(__file__).parent / "oracles" / "oracles.json"


@pytest.fixture(scope="session")
def oracles():
    return json.loads(ORACLE_PATH.read_text())


def split_key(key):
    return tuple(float(v) for v in key.split(","))

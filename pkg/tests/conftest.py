import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zerocover.density import get_model


@pytest.fixture(scope="session")
def powerlaw():
    return get_model("powerlaw4_segment")


@pytest.fixture(scope="session")
def example2():
    return get_model("example2")


@pytest.fixture(scope="session")
def pilot():
    path = Path(__file__).parent / "fixtures" / "pilot.json"
    return json.loads(path.read_text())

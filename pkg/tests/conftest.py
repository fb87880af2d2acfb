import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tsvkit import DEFAULT_GEOMETRY, DEFAULT_MATERIALS


@pytest.fixture
def geom():
    return DEFAULT_GEOMETRY


@pytest.fixture
def mat():
    return DEFAULT_MATERIALS

from pathlib import Path

import pytest

from services.model import Model
from utils.fixtures import build_baseline, build_enhanced
from utils.fixtures import default_scoring as make_default_scoring

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def baseline() -> Model:
    return build_baseline()


@pytest.fixture
def enhanced() -> Model:
    return build_enhanced()


@pytest.fixture
def default_scoring():
    return make_default_scoring()


@pytest.fixture
def empty_model(default_scoring) -> Model:
    return Model(scoring=default_scoring)


@pytest.fixture
def baseline_path() -> Path:
    return DATA_DIR / "baseline.json"


@pytest.fixture
def enhanced_path() -> Path:
    return DATA_DIR / "enhanced.json"


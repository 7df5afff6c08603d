import json
from pathlib import Path

import pytest

from siteval import ProjectConfig

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def campus_config_dict() -> dict:
    return json.loads((FIXTURES / "campus_bikeshare.json").read_text())


@pytest.fixture()
def campus_config(campus_config_dict) -> ProjectConfig:
    return ProjectConfig.from_dict(campus_config_dict)

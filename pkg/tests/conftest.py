import numpy as np
import pytest
from hypothesis import settings

from lib.config import config


def pytest_configure():
    settings.register_profile("dividekit", deadline=None, max_examples=40, derandomize=True)
    settings.load_profile("dividekit")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(config.get("SEED"))

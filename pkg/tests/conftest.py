import json
import pathlib

import pytest

from graphene_spp.config import RunConfig

DATA_DIR = pathlib.Path(__file__).parent / "data"


def as_complex(pair):
    """Goldens store complex numbers as [re, im] pairs."""
    return complex(pair[0], pair[1])


@pytest.fixture(scope="session")
def default_config() -> RunConfig:
    return RunConfig()


@pytest.fixture(scope="session")
def default_mode(default_config):
    return default_config.solve_mode()


@pytest.fixture(scope="session")
def goldens() -> dict:
    with open(DATA_DIR / "goldens.json") as handle:
        return json.load(handle)

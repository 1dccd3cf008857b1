import json
from functools import lru_cache
from pathlib import Path

import pytest

from app.cartan import parse_type
from app.steenrod import steenrod_table
from app.weyl import enumerate_cosets

GOLDEN = Path(__file__).parent / "golden"

# name -> (Lie type, parabolic nodes)
SPACES = {
    "g2": ("G2", ()),
    "f4": ("F4", (2, 3, 4)),
    "d6": ("D6", (1, 2, 3, 4, 5)),
    "a6": ("A6", (1, 2, 4, 5, 6)),
}


@lru_cache(maxsize=None)
def cosets_for(name: str):
    lie_type, parabolic = SPACES[name]
    return enumerate_cosets(parse_type(lie_type), parabolic)


@lru_cache(maxsize=None)
def table_for(name: str, p: int, k_list: tuple):
    cosets = cosets_for(name)
    return steenrod_table(cosets.cartan, cosets.parabolic, p, k_list, cosets=cosets)


def golden_text(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


def golden_json(name: str) -> dict:
    return json.loads(golden_text(name))


@pytest.fixture(scope="session")
def spaces():
    return {name: cosets_for(name) for name in SPACES}


@pytest.fixture(scope="session")
def g2():
    return parse_type("G2")


@pytest.fixture(scope="session")
def g2_cosets():
    return cosets_for("g2")


@pytest.fixture
def cache_dir(tmp_path):
    d = tmp_path / "cosets"
    d.mkdir()
    return d

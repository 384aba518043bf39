from __future__ import annotations

import random
from pathlib import Path

import pytest

from src.config import load_settings
from src.engine.exactlin import Field
from src.engine.leibniz import LeibnizAlgebra, trivial_rep
from src.engine.prototwilled import OmegaStructure
from src.zoo.examples import ExampleKind, ZooInputs, build, dim2_algebra

FIXTURES = Path(__file__).resolve().parent.parent / "demo" / "fixtures"


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; every test starts from the environment."""
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()


# -----------------------
# Fields and algebras
# -----------------------
@pytest.fixture
def gf2() -> Field:
    return Field.prime(2)


@pytest.fixture
def gf3() -> Field:
    return Field.prime(3)


@pytest.fixture
def gf5() -> Field:
    return Field.prime(5)


@pytest.fixture
def qq() -> Field:
    return Field.rational()


@pytest.fixture
def a2(gf5) -> LeibnizAlgebra:
    """``[e1, e1] = e2`` over GF(5)."""
    return dim2_algebra(gf5)


@pytest.fixture
def semidirect(a2) -> OmegaStructure:
    """``a2 (+) k`` with the trivial representation: deformation maps are r with [r, r] = 0."""
    return build(ExampleKind.SEMIDIRECT, ZooInputs(a2, rep=trivial_rep(a2, 1)))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


import os
import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
BACKEND_DIR = ROOT / "backend"

# Los módulos del backend se importan por nombre, como en la API
sys.path.insert(0, str(BACKEND_DIR))
os.environ.setdefault("MODELHOM_THREADS", "2")

from fixtures import load_declaration, load_fixture  # noqa: E402
from simplicial import ComponentUniverse, LabelledComplex  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture
def abc_universe():
    return ComponentUniverse(("a", "b", "c"), name="abc")


@pytest.fixture
def hollow_triangle(abc_universe):
    return LabelledComplex.from_labels(
        abc_universe, [["a"], ["b"], ["c"], ["a", "b"], ["a", "c"], ["b", "c"]], max_dim=2
    )


@pytest.fixture
def full_triangle(abc_universe):
    return LabelledComplex.from_labels(
        abc_universe,
        [["a"], ["b"], ["c"], ["a", "b"], ["a", "c"], ["b", "c"], ["a", "b", "c"]],
        max_dim=2,
    )


# --- Fixtures incluidos (inmutables, compartidos por la sesión) ---

@pytest.fixture(scope="session")
def lotka_volterra():
    return load_fixture("lotka_volterra")


@pytest.fixture(scope="session")
def tp1():
    return load_fixture("tp1_activator_inhibitor")


@pytest.fixture(scope="session")
def pi4():
    return load_fixture("pi4_annihilation")


@pytest.fixture(scope="session")
def ordered_sequential():
    return load_fixture("ordered_sequential")


@pytest.fixture(scope="session")
def random_sequential():
    return load_fixture("random_sequential")


@pytest.fixture(scope="session")
def ping_pong():
    return load_fixture("ping_pong")


@pytest.fixture(scope="session")
def pattern_concepts():
    return load_declaration("pattern_formation_concepts")


@pytest.fixture(scope="session")
def bisubstrate_concepts():
    return load_declaration("bisubstrate_concepts")

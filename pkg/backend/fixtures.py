# backend/fixtures.py - Corpus de modelos, declaraciones y guiones incluidos
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config import settings
from equivalence import ConceptDeclaration, EquivalenceOp
from exceptions import InputError
from model_io import ParsedModel, load_model, parse_declaration, parse_script, parse_universe, read_source
from simplicial import ComponentUniverse, LabelledComplex

logger = logging.getLogger(__name__)

# nombre -> (tipo, ruta relativa al directorio de fixtures)
FIXTURES: Dict[str, Tuple[str, str]] = {
    "lotka_volterra": ("model", "models/lotka_volterra.json"),
    "ordered_sequential": ("model", "models/ordered_sequential.json"),
    "random_sequential": ("model", "models/random_sequential.json"),
    "ping_pong": ("model", "models/ping_pong.json"),
    "pi4_annihilation": ("model", "corpus/pi4_annihilation.json"),
    "tp1_activator_inhibitor": ("model", "corpus/tp1_activator_inhibitor.json"),
    "pi1_template": ("model", "corpus/pi1_template.json"),
    "pi2_template": ("model", "corpus/pi2_template.json"),
    "pi3_template": ("model", "corpus/pi3_template.json"),
    "pi5_template": ("model", "corpus/pi5_template.json"),
    "tp2_template": ("model", "corpus/tp2_template.json"),
    "tp3_template": ("model", "corpus/tp3_template.json"),
    "tp4_template": ("model", "corpus/tp4_template.json"),
    "pattern_formation_concepts": ("declaration", "declarations/pattern_formation_concepts.json"),
    "bisubstrate_concepts": ("declaration", "declarations/bisubstrate_concepts.json"),
    "tp1_to_pi4": ("script", "scripts/tp1_to_pi4.json"),
    "ordered_to_random": ("script", "scripts/ordered_to_random.json"),
    "random_to_ordered": ("script", "scripts/random_to_ordered.json"),
    "pattern_formation_components": ("universe", "universes/pattern_formation_components.json"),
    "bisubstrate_components": ("universe", "universes/bisubstrate_components.json"),
    "lotka_volterra_components": ("universe", "universes/lotka_volterra_components.json"),
}


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise InputError(f"Fixture desconocido: {name!r} (disponibles: {', '.join(sorted(FIXTURES))})")
    return settings.MODELHOM_FIXTURES_DIR / FIXTURES[name][1]


def fixture_kind(name: str) -> str:
    fixture_path(name)
    return FIXTURES[name][0]


def fixture_names(kind: Optional[str] = None) -> List[str]:
    return sorted(name for name, (k, _) in FIXTURES.items() if kind is None or k == kind)


def fixture_bytes(name: str) -> bytes:
    return read_source(fixture_path(name))


def load_parsed_fixture(name: str) -> ParsedModel:
    if fixture_kind(name) != "model":
        raise InputError(f"El fixture {name!r} no es un modelo")
    parsed = load_model(fixture_path(name))
    if (parsed.document.metadata or {}).get("status") == "template":
        logger.warning(f"⚠️ {name} es una plantilla sin aristas; complete el modelo antes de usarlo")
    logger.info(f"Fixture cargado: {name} ({len(parsed.complex)} símplices)")
    return parsed


def load_fixture(name: str) -> LabelledComplex:
    return load_parsed_fixture(name).complex


def load_declaration(name: str) -> ConceptDeclaration:
    if fixture_kind(name) != "declaration":
        raise InputError(f"El fixture {name!r} no es una declaración")
    return parse_declaration(fixture_bytes(name), str(fixture_path(name)))


def load_script(name: str) -> List[EquivalenceOp]:
    if fixture_kind(name) != "script":
        raise InputError(f"El fixture {name!r} no es un guion")
    return parse_script(fixture_bytes(name), str(fixture_path(name)))


def load_universe(name: str) -> ComponentUniverse:
    if fixture_kind(name) != "universe":
        raise InputError(f"El fixture {name!r} no es un universo")
    return parse_universe(fixture_bytes(name), str(fixture_path(name)))

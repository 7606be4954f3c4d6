# scripts/reconstruct_fixtures.py - Regenera los fixtures reconstruidos y comprueba sus conteos
import argparse
import logging
import os
import re
import sys
from itertools import combinations
from pathlib import Path

# Agregar el directorio backend al path para encontrar los módulos
sys.path.append(os.path.join(os.path.dirname(__file__), "..", "backend"))

from config import settings  # noqa: E402
from distance import d_simplicial  # noqa: E402
from equivalence import (  # noqa: E402
    ConceptDeclaration,
    IdentifyAdjacent,
    IdentifyNonadjacent,
    Include,
    Substitute,
    verify_script,
)
from filtration import ShortlexOrder  # noqa: E402
from model_io import (  # noqa: E402
    build_complex,
    dump_canonical,
    serialize_declaration,
    serialize_model,
    serialize_script,
)
from models import ModelDocument  # noqa: E402
from persistence import betti  # noqa: E402

logging.basicConfig(level=settings.MODELHOM_LOG_LEVEL, format=settings.LOG_FORMAT)
logger = logging.getLogger("FixtureReconstructor")


# --- Reglas de construcción ---

LOTKA_VOLTERRA = (
    "Prey", "Prey growth", "Predation", "Oscillatory population",
    "Predator", "Predator growth", "Predator death",
)
LOTKA_VOLTERRA_EDGES = [
    ("Prey", "Prey growth"), ("Prey", "Predation"), ("Prey", "Oscillatory population"),
    ("Prey growth", "Predation"), ("Prey growth", "Oscillatory population"),
    ("Predation", "Oscillatory population"), ("Predation", "Predator"),
    ("Predation", "Predator growth"), ("Oscillatory population", "Predator"),
    ("Oscillatory population", "Predator growth"), ("Oscillatory population", "Predator death"),
    ("Predator", "Predator growth"), ("Predator", "Predator death"),
    ("Predator growth", "Predator death"),
]

BISUBSTRATE_BASE = ("E", "A", "EA", "B", "EAB", "EPQ", "P", "EQ", "Q")
# Cada paso de reacción X + Y <-> Z aporta el 2-símplice {X, Y, Z}
ORDERED_STEPS = [("E", "A", "EA"), ("EA", "B", "EAB"), ("EPQ", "P", "EQ"), ("EQ", "E", "Q")]
ORDERED_LINKS = [("EAB", "EPQ")]
PING_PONG_STEPS = [("E", "A", "EA"), ("E*P", "E*", "P"), ("E*", "B", "E*B"), ("EQ", "E", "Q")]
PING_PONG_LINKS = [("EA", "E*P"), ("E*B", "EQ")]

PATTERN_FORMATION = (
    "Morphogen 1", "Diffusion 1", "Degradation 1", "Saturation 1", "Basal production 1",
    "Influx 1", "Outflux 1", "Zero flux 1", "Morphogen 2", "Diffusion 2", "Degradation 2",
    "Basal production 2", "Influx 2", "Outflux 2", "Zero flux 2", "Modulator",
    "Diffusion of modulator", "Degradation of modulator", "Basal production of modulator",
    "Influx of modulator", "Substrate", "Diffusion of substrate", "Degradation of substrate",
    "Basal production of substrate", "Linear production",
    "Annihilation between Morphogens 1 and 2", "Self-activation of Morphogen 1",
    "Activation of Morphogen 2 by Morphogen 1", "Inhibition of Morphogen 1 by Morphogen 2",
    "Self-activation of Morphogen 2", "Inhibition of Morphogen 2 by Morphogen 1",
    "Activation of Morphogen 1 by Morphogen 2", "Inhibition of Morphogen 1 by modulator",
    "Modulation of Morphogen 2 by modulator", "Consumption of substrate by Morphogen 1",
    "Activation of Morphogen 1 by substrate", "Inhibition of an inhibition",
    "Scaling by modulator", "Exponential gradient", "Monotonic gradient", "Oscillatory gradient",
    "Local scale-invariance", "Global scale-invariance",
)
ANNIHILATION = "Annihilation between Morphogens 1 and 2"
ACTIVATION = "Activation of Morphogen 2 by Morphogen 1"
INHIBITION = "Inhibition of Morphogen 1 by Morphogen 2"
SELF_ACTIVATION = "Self-activation of Morphogen 1"
# Núcleo compartido: tres 4-símplices sobre el gradiente y los morfógenos
CORE_CLIQUES = [
    ("Monotonic gradient", "Morphogen 1", "Diffusion 1", "Degradation 1", "Global scale-invariance"),
    ("Monotonic gradient", "Morphogen 1", "Diffusion 1", "Global scale-invariance", "Morphogen 2"),
    ("Monotonic gradient", "Morphogen 2", "Influx 2", "Diffusion 2", "Degradation 2"),
]
INTERACTION_LINKS = ("Morphogen 1", "Morphogen 2", "Global scale-invariance", "Monotonic gradient", "Degradation 1")
PRODUCTION_LINKS = ("Morphogen 1", "Diffusion 1", "Monotonic gradient", "Morphogen 2", "Influx 2")
TP_RENAMES = {"Monotonic gradient": "Oscillatory gradient", "Influx 2": "Basal production 2"}

PATTERN_CONCEPTS = [
    ("Influx 1", "Basal production 1", SELF_ACTIVATION),
    ("Influx 2", "Basal production 2"),
    ("Monotonic gradient", "Oscillatory gradient"),
    (ANNIHILATION, ACTIVATION, INHIBITION),
]
TEMPLATES = ("pi1", "pi2", "pi3", "pi5", "tp2", "tp3", "tp4")

PATTERN_METADATA = {
    "construction": "one-skeleton reconstructed so that flag completion at max_dim 5 reproduces the published simplex counts",
    "provenance": "reconstructed",
    "universe_positions": "fixed for the named model components; remaining positions reconstructed",
}
BISUBSTRATE_METADATA = {
    "construction": "each reaction step contributes the 2-simplex of its participants",
    "provenance": "reconstructed",
}

EXPECTED_COUNTS = {
    "pi4_annihilation": [11, 33, 43, 26, 6, 0],
    "tp1_activator_inhibitor": [13, 45, 70, 55, 21, 3],
}
EXPECTED_TP1_PI4_DISTANCE = 268


def subscripted(label: str, k: int) -> str:
    return re.sub(r"([A-Z])", rf"\g<1>{k}", label)


def pair_edges(cliques):
    """Aristas de cada clique, sin repetir, en orden de aparición."""
    edges = []
    for clique in cliques:
        for pair in combinations(clique, 2):
            if set(pair) not in [set(e) for e in edges]:
                edges.append(pair)
    return edges


def flag_document(name, universe_name, labels, edges, max_dim, metadata) -> ModelDocument:
    return ModelDocument.model_validate({
        "name": name,
        "universe": {"labels": list(labels), "name": universe_name},
        "mode": "flag",
        "max_dim": max_dim,
        "edges": [list(edge) for edge in edges],
        "metadata": metadata,
    })


# --- CLASE DEL RECONSTRUCTOR ---
class FixtureReconstructor:
    def __init__(self, fixtures_dir: Path, check_only: bool = False):
        self.fixtures_dir = fixtures_dir
        self.check_only = check_only
        self.documents = {}
        self.stats = {"written": 0, "unchanged": 0, "checks_passed": 0, "errors": 0}

    def _output(self, relative: str, content: bytes):
        path = self.fixtures_dir / relative
        if path.exists() and path.read_bytes() == content:
            self.stats["unchanged"] += 1
            return
        if self.check_only:
            logger.error(f"El fixture {relative} difiere de su forma reconstruida")
            self.stats["errors"] += 1
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(content)
        self.stats["written"] += 1
        logger.info(f"✅ Escrito {relative}")

    def _check(self, description: str, ok: bool):
        if ok:
            self.stats["checks_passed"] += 1
            logger.info(f"✅ {description}")
        else:
            self.stats["errors"] += 1
            logger.error(f"Comprobación fallida: {description}")

    def build_models(self):
        """Construye los documentos de modelo a partir de sus reglas."""
        logger.info("--- FASE 1: Modelos ---")
        self.documents["models/lotka_volterra.json"] = flag_document(
            "lotka_volterra", "lotka_volterra_components", LOTKA_VOLTERRA, LOTKA_VOLTERRA_EDGES, 6,
            {
                "construction": "flag completion of the 14 interconnections",
                "provenance": "conceptual interconnection table",
            },
        )

        bisubstrate = list(BISUBSTRATE_BASE) + ["E*P", "E*", "E*B"]
        for k in range(1, 5):
            bisubstrate += [subscripted(label, k) for label in BISUBSTRATE_BASE]
        ordered = pair_edges(ORDERED_STEPS) + ORDERED_LINKS
        random_sequential = [
            tuple(subscripted(label, k) for label in edge) for k in range(1, 5) for edge in ordered
        ]
        ping_pong = pair_edges(PING_PONG_STEPS) + PING_PONG_LINKS
        for name, edges in (
            ("ordered_sequential", ordered),
            ("random_sequential", random_sequential),
            ("ping_pong", ping_pong),
        ):
            self.documents[f"models/{name}.json"] = flag_document(
                name, "bisubstrate_components", bisubstrate, edges, 2, BISUBSTRATE_METADATA
            )
        self.bisubstrate = bisubstrate

        core = pair_edges(CORE_CLIQUES)
        pi4 = core + [(ANNIHILATION, v) for v in INTERACTION_LINKS] + [("Influx 1", v) for v in PRODUCTION_LINKS]
        tp1 = [tuple(TP_RENAMES.get(label, label) for label in edge) for edge in core]
        # Pares de vértices gemelos adyacentes en lugar de la aniquilación y el influjo
        for twins, links in (((ACTIVATION, INHIBITION), INTERACTION_LINKS), (("Basal production 1", SELF_ACTIVATION), PRODUCTION_LINKS)):
            for twin in twins:
                tp1 += [(twin, TP_RENAMES.get(v, v)) for v in links]
            tp1.append(twins)
        self.documents["corpus/pi4_annihilation.json"] = flag_document(
            "pi4_annihilation", "pattern_formation_components", PATTERN_FORMATION, pi4, 5, PATTERN_METADATA
        )
        self.documents["corpus/tp1_activator_inhibitor.json"] = flag_document(
            "tp1_activator_inhibitor", "pattern_formation_components", PATTERN_FORMATION, tp1, 5, PATTERN_METADATA
        )
        for template in TEMPLATES:
            self.documents[f"corpus/{template}_template.json"] = flag_document(
                f"{template}_template", "pattern_formation_components", PATTERN_FORMATION, [], 5,
                {"note": "model definition not bundled; fill in edges before use", "status": "template"},
            )

    def check_models(self):
        """Comprueba conteos, distancias y componentes de los modelos reconstruidos."""
        logger.info("--- FASE 2: Comprobaciones ---")
        built = {
            relative: build_complex(document, location=relative).complex
            for relative, document in self.documents.items()
        }
        self.complexes = built
        pi4 = built["corpus/pi4_annihilation.json"]
        tp1 = built["corpus/tp1_activator_inhibitor.json"]
        self._check("PI4: símplices por dimensión", pi4.counts_by_dim(5) == EXPECTED_COUNTS["pi4_annihilation"])
        self._check("TP1: símplices por dimensión", tp1.counts_by_dim(5) == EXPECTED_COUNTS["tp1_activator_inhibitor"])
        self._check("d(TP1, PI4) = 268", d_simplicial(tp1, pi4) == EXPECTED_TP1_PI4_DISTANCE)

        lotka = built["models/lotka_volterra.json"]
        self._check("Lotka-Volterra: tres 3-símplices y ningún 4-símplice", lotka.counts_by_dim(4)[3:] == [3, 0])

        random_sequential = built["models/random_sequential.json"]
        order = ShortlexOrder(random_sequential.universe, 2)
        self._check("Secuencial aleatorio: cuatro componentes", betti(random_sequential, order)[0] == 4)

    def build_equivalences(self):
        """Declaraciones y guiones de equivalencia."""
        logger.info("--- FASE 3: Declaraciones y guiones ---")
        pattern = ConceptDeclaration.from_lists(PATTERN_CONCEPTS, "pattern_formation_concepts")
        bisubstrate = ConceptDeclaration.from_lists(
            [[label] + [subscripted(label, k) for k in range(1, 5)] for label in BISUBSTRATE_BASE],
            "bisubstrate_concepts",
        )
        tp1_to_pi4 = [
            IdentifyAdjacent("Basal production 1", SELF_ACTIVATION, "Influx 1"),
            Substitute("Basal production 2", "Influx 2"),
            Substitute("Oscillatory gradient", "Monotonic gradient"),
            IdentifyAdjacent(ACTIVATION, INHIBITION, ANNIHILATION),
        ]
        ordered = self.complexes["models/ordered_sequential.json"]
        copies = frozenset(
            frozenset(subscripted(label, k) for label in simplex)
            for k in range(2, 5)
            for simplex in ordered.label_sets()
        )
        ordered_to_random = [Substitute(label, subscripted(label, 1)) for label in BISUBSTRATE_BASE]
        ordered_to_random.append(Include(copies))
        # Identificación simultánea de las cuatro copias sobre cada componente del modelo ordenado
        random_to_ordered = [
            IdentifyNonadjacent(tuple(
                (tuple(subscripted(label, k) for k in range(1, 5)), label)
                for label in BISUBSTRATE_BASE
            ))
        ]

        tp1 = self.complexes["corpus/tp1_activator_inhibitor.json"]
        pi4 = self.complexes["corpus/pi4_annihilation.json"]
        random_sequential = self.complexes["models/random_sequential.json"]
        self._check("Guion TP1 -> PI4", verify_script(tp1, tp1_to_pi4, pi4, pattern).accepted)
        self._check(
            "Guion ordenado -> aleatorio (cociente)",
            verify_script(ordered, ordered_to_random, random_sequential, bisubstrate, "quotient").accepted,
        )
        self._check(
            "Guion aleatorio -> ordenado (cociente)",
            verify_script(random_sequential, random_to_ordered, ordered, bisubstrate, "quotient").accepted,
        )

        self._output("declarations/pattern_formation_concepts.json", serialize_declaration(pattern))
        self._output("declarations/bisubstrate_concepts.json", serialize_declaration(bisubstrate))
        self._output("scripts/tp1_to_pi4.json", serialize_script(tp1_to_pi4))
        self._output("scripts/ordered_to_random.json", serialize_script(ordered_to_random))
        self._output("scripts/random_to_ordered.json", serialize_script(random_to_ordered))

    def write_models(self):
        logger.info("--- FASE 4: Documentos canónicos ---")
        for relative, document in self.documents.items():
            self._output(relative, serialize_model(document))
        for name, labels in (
            ("lotka_volterra_components", LOTKA_VOLTERRA),
            ("bisubstrate_components", self.bisubstrate),
            ("pattern_formation_components", PATTERN_FORMATION),
        ):
            self._output(f"universes/{name}.json", dump_canonical({"labels": list(labels), "name": name}))

    def run(self) -> int:
        self.build_models()
        self.check_models()
        self.build_equivalences()
        self.write_models()

        print("\n" + "=" * 50)
        logger.info("RESUMEN FINAL DE LA RECONSTRUCCIÓN")
        logger.info(f"Escritos: {self.stats['written']}")
        logger.info(f"Sin cambios: {self.stats['unchanged']}")
        logger.info(f"Comprobaciones superadas: {self.stats['checks_passed']}")
        logger.info(f"Errores Totales: {self.stats['errors']}")
        print("=" * 50)

        if self.stats["errors"] == 0:
            logger.info("🎉 ¡Fixtures reconstruidos correctamente!")
            return 0
        logger.warning("⚠️  La reconstrucción finalizó con errores.")
        return 1


# --- BLOQUE PRINCIPAL DE EJECUCIÓN ---
if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Regenera los fixtures reconstruidos")
    parser.add_argument("--check", action="store_true", help="Solo compara con los archivos existentes")
    parser.add_argument("--fixtures-dir", default=str(settings.MODELHOM_FIXTURES_DIR))
    args = parser.parse_args()
    sys.exit(FixtureReconstructor(Path(args.fixtures_dir), args.check).run())

# backend/comparison_service.py - Flujos de comparación compartidos por la CLI y la API
import logging
from typing import Any, Dict, List, Optional, Sequence

from barcodes import barcode_document, export_barcode
from config import settings
from distance import DistanceMatrix, d_persistence, d_simplicial, distance_matrix
from equivalence import ConceptDeclaration, EquivalenceOp, search_equivalence, verify_script
from exceptions import InputError
from filtration import FiltrationOrder, ShortlexOrder, permuted_order, shortlex_rank, shortlex_unrank
from model_io import ParsedModel, script_steps
from persistence import diagram_of
from simplicial import ComponentUniverse, LabelledComplex, Simplex, symmetric_difference, validate

logger = logging.getLogger(__name__)


def counts_line(counts: Sequence[int]) -> str:
    return " ".join(f"{dim}:{count}" for dim, count in enumerate(counts))


class ComparisonService:
    """Orquesta construcción, códigos de barras, distancias y equivalencias."""

    def __init__(self):
        self.fixtures_available = settings.MODELHOM_FIXTURES_DIR.is_dir()
        if not self.fixtures_available:
            logger.warning(f"⚠️ No se encontró el directorio de fixtures: {settings.MODELHOM_FIXTURES_DIR}")

    # --- Filtraciones ---

    def order_for(
        self,
        complexes: Sequence[LabelledComplex],
        max_dim: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> FiltrationOrder:
        """Shortlex sobre R^(m), con m la mayor dimensión de los modelos salvo que se indique."""
        if not complexes:
            raise InputError("Se necesita al menos un modelo para construir la filtración")
        if max_dim is None:
            max_dim = max(max(c.dimension for c in complexes), 0)
        order: FiltrationOrder = ShortlexOrder(complexes[0].universe, max_dim)
        if seed is not None:
            order = permuted_order(order, seed)
        return order

    # --- Flujos ---

    def build(self, parsed: ParsedModel) -> Dict[str, Any]:
        complex_ = parsed.complex
        report = validate(complex_)
        top = min(complex_.max_dim, complex_.dimension + 1)
        counts = complex_.counts_by_dim(up_to=max(top, 0))
        logger.info(f"Modelo {parsed.name}: {counts_line(counts)}")
        return {
            "success": True,
            "name": parsed.name,
            "counts": counts,
            "valid": report.ok,
            "violations": report.describe(),
            "auto_closed": parsed.auto_closed,
        }

    def barcode(
        self,
        parsed: ParsedModel,
        fmt: str = "json",
        seed: Optional[int] = None,
        max_dim: Optional[int] = None,
    ) -> Dict[str, Any]:
        order = self.order_for([parsed.complex], max_dim, seed)
        diagram = diagram_of(parsed.complex, order, parsed.name)
        rendered = export_barcode(diagram, fmt)
        return {
            "success": True,
            "format": fmt,
            "document": barcode_document(diagram) if fmt == "json" else rendered,
            "rendered": rendered,
        }

    def distance(
        self,
        first: ParsedModel,
        second: ParsedModel,
        mode: str = "simplicial",
        seed: Optional[int] = None,
        max_dim: Optional[int] = None,
    ) -> Dict[str, Any]:
        K, L = first.complex, second.complex
        if mode == "simplicial":
            value = d_simplicial(K, L)
        elif mode == "persistence":
            symmetric_difference(K, L)
            order = self.order_for([K, L], max_dim, seed)
            value = d_persistence(diagram_of(K, order, first.name), diagram_of(L, order, second.name))
        else:
            raise InputError(f"Modo de distancia desconocido: {mode!r} (use simplicial o persistence)")
        return {"success": True, "mode": mode, "distance": value}

    def matrix(self, models: Sequence[ParsedModel], mode: str = "simplicial") -> DistanceMatrix:
        if not models:
            raise InputError("No hay modelos para comparar")
        complexes = [parsed.complex for parsed in models]
        order = self.order_for(complexes) if mode == "persistence" else None
        return distance_matrix(complexes, mode, [parsed.name for parsed in models], order)

    def rank(self, labels: Sequence[str], universe: ComponentUniverse, max_dim: int) -> int:
        return shortlex_rank(Simplex.of(universe.indices(labels)), universe, max_dim)

    def unrank(self, rank: int, universe: ComponentUniverse, max_dim: int) -> List[str]:
        simplex = shortlex_unrank(rank, universe, max_dim)
        return [universe.label(v) for v in simplex.vertices]

    def verify(
        self,
        source: ParsedModel,
        target: ParsedModel,
        script: Sequence[EquivalenceOp],
        declaration: ConceptDeclaration,
        mode: str = "strict",
    ) -> Dict[str, Any]:
        verdict = verify_script(source.complex, script, target.complex, declaration, mode)
        return {
            "success": True,
            "accepted": verdict.accepted,
            "failed_step": verdict.failed_step,
            "reason": verdict.reason,
            "trace": verdict.render(),
        }

    def search(
        self,
        source: ParsedModel,
        target: ParsedModel,
        declaration: ConceptDeclaration,
        max_ops: int,
        mode: str = "strict",
    ) -> Dict[str, Any]:
        result = search_equivalence(source.complex, target.complex, declaration, max_ops, mode)
        return {
            "success": True,
            "found": result.found,
            "script": script_steps(result.script) if result.found else None,
            "expanded": result.expanded,
            "message": result.describe(),
        }

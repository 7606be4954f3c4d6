# backend/distance.py - Distancias entre modelos: simplicial y por persistencia
from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config import settings
from exceptions import InputError, ProvenanceError
from filtration import FiltrationOrder, ShortlexOrder
from persistence import PersistenceDiagram, diagram_of
from simplicial import LabelledComplex, Simplex, symmetric_difference

logger = logging.getLogger(__name__)

MODES = ("simplicial", "persistence")


def d_simplicial(K: LabelledComplex, L: LabelledComplex) -> int:
    """|K △ L|."""
    return len(symmetric_difference(K, L))


def theta(diagram: PersistenceDiagram) -> FrozenSet[int]:
    """Nacimientos y muertes finitas de todos los intervalos."""
    endpoints = {interval.birth for interval in diagram.intervals}
    endpoints.update(interval.death for interval in diagram.intervals if interval.is_finite)
    return frozenset(endpoints)


def _check_provenance(P: PersistenceDiagram, Q: PersistenceDiagram) -> None:
    if P.fingerprint is None or Q.fingerprint is None:
        raise ProvenanceError("Diagrama sin filtración de origen; no se puede comparar")
    if P.fingerprint != Q.fingerprint:
        raise ProvenanceError(
            f"Diagramas de filtraciones distintas ({P.fingerprint} vs {Q.fingerprint})"
        )


def d_persistence(P: PersistenceDiagram, Q: PersistenceDiagram) -> int:
    """|Θ(P) △ Θ(Q)| para diagramas de la misma filtración plana."""
    _check_provenance(P, Q)
    return len(theta(P) ^ theta(Q))


def infer_distance(JK: Iterable[Simplex], KL: Iterable[Simplex]) -> int:
    """d(J, L) a partir de J △ K y K △ L."""
    return len(frozenset(JK) ^ frozenset(KL))


@dataclass(frozen=True)
class DistanceMatrix:
    names: Tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64)
        if entries.shape != (len(self.names), len(self.names)):
            raise InputError(f"Matriz de forma {entries.shape} para {len(self.names)} modelos")
        entries.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "entries", entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.names, self.entries.tobytes()))

    def get(self, first: str, second: str) -> int:
        return int(self.entries[self.names.index(first), self.names.index(second)])

    def to_frame(self) -> pd.DataFrame:
        index = pd.Index(list(self.names), name="model")
        return pd.DataFrame(self.entries, index=index, columns=list(self.names))


@dataclass(frozen=True)
class MetricAudit:
    symmetric: bool
    zero_diagonal: bool
    triangle: bool
    violations: Tuple[Tuple[int, int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.symmetric and self.zero_diagonal and self.triangle


def _pair_distance(
    first: LabelledComplex,
    second: LabelledComplex,
    mode: str,
    diagrams: Optional[Sequence[PersistenceDiagram]],
    i: int,
    j: int,
) -> Tuple[int, int, int]:
    if mode == "simplicial":
        return i, j, d_simplicial(first, second)
    return i, j, d_persistence(diagrams[i], diagrams[j])


def distance_matrix(
    models: Sequence[LabelledComplex],
    mode: str = "simplicial",
    names: Optional[Sequence[str]] = None,
    order: Optional[FiltrationOrder] = None,
) -> DistanceMatrix:
    """
    Distancias por pares. En modo persistencia todos los diagramas usan la
    misma filtración (por defecto shortlex con m = dimensión máxima de los modelos).
    """
    if mode not in MODES:
        raise InputError(f"Modo de distancia desconocido: {mode!r}")
    names = tuple(names) if names is not None else tuple(f"M{i + 1}" for i in range(len(models)))
    if len(names) != len(models):
        raise InputError("El número de nombres no coincide con el de modelos")
    if models:
        first = models[0]
        for other in models[1:]:
            symmetric_difference(first, other)

    diagrams = None
    if mode == "persistence" and models:
        if order is None:
            max_dim = max(max(m.max_dim, m.dimension) for m in models)
            order = ShortlexOrder(models[0].universe, max(max_dim, 0))
        diagrams = Parallel(n_jobs=settings.n_jobs, backend="threading")(
            delayed(diagram_of)(model, order, name) for model, name in zip(models, names)
        )

    pairs = list(combinations(range(len(models)), 2))
    results = Parallel(n_jobs=settings.n_jobs, backend="threading")(
        delayed(_pair_distance)(models[i], models[j], mode, diagrams, i, j) for i, j in pairs
    )
    entries = np.zeros((len(models), len(models)), dtype=np.int64)
    for i, j, value in results:
        entries[i, j] = entries[j, i] = value
    logger.info(f"Matriz de distancias ({mode}) calculada para {len(models)} modelos")
    return DistanceMatrix(names, entries)


def check_metric(matrix: DistanceMatrix) -> MetricAudit:
    d = matrix.entries
    n = len(matrix.names)
    violations: List[Tuple[int, int, int]] = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i, k] > d[i, j] + d[j, k]:
                    violations.append((i, j, k))
    return MetricAudit(
        bool(np.array_equal(d, d.T)),
        bool(np.all(np.diag(d) == 0)),
        not violations,
        tuple(violations),
    )


def export_matrix(matrix: DistanceMatrix, fmt: str = "csv") -> str:
    """CSV con nombres en la primera fila y columna, o JSON con la misma estructura."""
    frame = matrix.to_frame()
    if fmt == "csv":
        buffer = io.StringIO()
        frame.to_csv(buffer, lineterminator="\n")
        return buffer.getvalue()
    if fmt == "json":
        return frame.to_json(orient="split") + "\n"
    raise InputError(f"Formato de matriz desconocido: {fmt!r} (use csv o json)")

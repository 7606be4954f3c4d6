# backend/persistence.py - Homología persistente sobre Z/2Z de filtraciones planas
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from exceptions import FiltrationError
from filtration import FiltrationOrder, InducedFiltration, induce
from simplicial import LabelledComplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PersistenceInterval:
    """Intervalo [birth, death) en rangos de R^(m); death None = infinito."""

    dim: int
    birth: int
    death: Optional[int] = None

    def __post_init__(self):
        if self.dim < 0 or self.birth < 1:
            raise ValueError(f"Intervalo inválido: {self}")
        if self.death is not None and self.death <= self.birth:
            raise ValueError(f"Intervalo con muerte <= nacimiento: {self}")

    @property
    def is_finite(self) -> bool:
        return self.death is not None

    def __repr__(self) -> str:
        death = "inf" if self.death is None else self.death
        return f"H{self.dim} [{self.birth}, {death})"


@dataclass(frozen=True)
class PersistenceDiagram:
    """
    Multiconjunto de intervalos de persistencia de un complejo bajo una
    filtración plana. `fingerprint` identifica la filtración de origen.
    """

    intervals: Tuple[PersistenceInterval, ...]
    simplex_count: int
    fingerprint: Optional[str] = None
    universe_hash: str = ""
    model: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "intervals", tuple(sorted(self.intervals, key=lambda i: (i.dim, i.birth)))
        )

    @property
    def dimensions(self) -> List[int]:
        return sorted({interval.dim for interval in self.intervals})

    def in_dim(self, dim: int) -> Tuple[PersistenceInterval, ...]:
        return tuple(interval for interval in self.intervals if interval.dim == dim)

    def finite(self) -> Tuple[PersistenceInterval, ...]:
        return tuple(interval for interval in self.intervals if interval.is_finite)

    def infinite(self) -> Tuple[PersistenceInterval, ...]:
        return tuple(interval for interval in self.intervals if not interval.is_finite)

    def counts(self) -> Dict[int, Tuple[int, int]]:
        """Por dimensión: (intervalos finitos, intervalos infinitos)."""
        finite = Counter(i.dim for i in self.intervals if i.is_finite)
        infinite = Counter(i.dim for i in self.intervals if not i.is_finite)
        return {dim: (finite[dim], infinite[dim]) for dim in self.dimensions}

    def betti(self) -> List[int]:
        top = max(self.dimensions, default=-1)
        counts = [0] * (top + 1)
        for interval in self.infinite():
            counts[interval.dim] += 1
        return counts

    def has_multiplicity_one(self) -> bool:
        births = [i.birth for i in self.intervals]
        deaths = [i.death for i in self.intervals if i.is_finite]
        return len(births) == len(set(births)) and len(deaths) == len(set(deaths))

    def accounts_for_all_simplices(self) -> bool:
        return 2 * len(self.finite()) + len(self.infinite()) == self.simplex_count


def compute_persistence(filtration: InducedFiltration, model: str = "") -> PersistenceDiagram:
    """
    Reducción por columnas de izquierda a derecha de la matriz de borde sobre Z/2Z.
    Cada columna es un entero de Python usado como vector de bits; el pivote es
    el bit más alto (la cara más tardía en la filtración).
    """
    steps = filtration.steps
    position = {simplex: j for j, (_, simplex) in enumerate(steps)}

    reduced: Dict[int, int] = {}
    pivot_owner: Dict[int, int] = {}
    killed_by: Dict[int, int] = {}

    for j, (_, simplex) in enumerate(steps):
        column = 0
        if simplex.dim > 0:
            for facet in simplex.facets():
                if facet not in position:
                    raise FiltrationError(f"La cara {facet!r} de {simplex!r} no está en el complejo")
                column |= 1 << position[facet]
        while column:
            low = column.bit_length() - 1
            owner = pivot_owner.get(low)
            if owner is None:
                pivot_owner[low] = j
                reduced[j] = column
                killed_by[low] = j
                break
            column ^= reduced[owner]

    intervals = []
    for j, (rank, simplex) in enumerate(steps):
        if j in reduced:
            continue
        killer = killed_by.get(j)
        death = None if killer is None else steps[killer][0]
        intervals.append(PersistenceInterval(simplex.dim, rank, death))

    logger.debug(
        f"Persistencia: {len(steps)} símplices, {len(reduced)} pares, "
        f"{len(intervals) - len(reduced)} clases esenciales"
    )
    return PersistenceDiagram(
        tuple(intervals),
        len(steps),
        filtration.fingerprint,
        filtration.complex.universe.fingerprint,
        model,
    )


def diagram_of(
    complex_: LabelledComplex, order: FiltrationOrder, model: str = ""
) -> PersistenceDiagram:
    return compute_persistence(induce(complex_, order), model)


def betti(complex_: LabelledComplex, order: FiltrationOrder) -> List[int]:
    """Números de Betti β_0..β_dim sobre Z/2Z (independientes de la filtración)."""
    counts = diagram_of(complex_, order).betti()
    return counts + [0] * (complex_.dimension + 1 - len(counts))

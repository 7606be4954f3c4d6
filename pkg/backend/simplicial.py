# backend/simplicial.py - Universos de componentes, símplices y complejos etiquetados
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from exceptions import InputError, UniverseMismatchError

logger = logging.getLogger(__name__)

LabelSet = FrozenSet[str]


@dataclass(frozen=True)
class ComponentUniverse:
    """
    Conjunto ordenado de componentes. La posición (1-based) de cada etiqueta
    es su índice de vértice en todos los complejos construidos sobre él.
    """

    labels: Tuple[str, ...]
    name: str = field(default="", compare=False)
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        index: Dict[str, int] = {}
        for position, label in enumerate(labels, start=1):
            if not isinstance(label, str) or not label:
                raise InputError(f"Etiqueta inválida en la posición {position}: {label!r}")
            if label in index:
                raise InputError(f"Etiqueta repetida en el universo: {label!r}")
            index[label] = position
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __hash__(self) -> int:
        return hash(self.labels)

    def ord(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"Etiqueta desconocida en el universo: {label!r}") from None

    def label(self, vertex: int) -> str:
        if not 1 <= vertex <= len(self.labels):
            raise InputError(f"Vértice fuera del universo: {vertex}")
        return self.labels[vertex - 1]

    def indices(self, labels: Iterable[str]) -> Tuple[int, ...]:
        return tuple(self.ord(label) for label in labels)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256("\n".join(self.labels).encode("utf-8")).hexdigest()
        return digest[:16]

    def is_prefix_of(self, other: "ComponentUniverse") -> bool:
        return other.labels[: len(self.labels)] == self.labels

    def extended(self, labels: Iterable[str]) -> "ComponentUniverse":
        """Añade al final las etiquetas que aún no existen, conservando el orden dado."""
        new_labels = list(self.labels)
        for label in labels:
            if label not in self._index and label not in new_labels:
                new_labels.append(label)
        if len(new_labels) == len(self.labels):
            return self
        return ComponentUniverse(tuple(new_labels), name=self.name)

    def permuted(self, permutation: Sequence[int]) -> "ComponentUniverse":
        """Reordena el universo; `permutation[i]` es la posición antigua del nuevo vértice i+1."""
        if sorted(permutation) != list(range(1, len(self.labels) + 1)):
            raise InputError("La permutación no es una biyección sobre el universo")
        return ComponentUniverse(tuple(self.label(p) for p in permutation), name=self.name)


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: Tuple[int, ...]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if not vertices:
            raise InputError("Un símplice no puede ser vacío")
        for vertex in vertices:
            if not isinstance(vertex, int) or isinstance(vertex, bool) or vertex < 1:
                raise InputError(f"Índice de vértice inválido: {vertex!r}")
        if any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise InputError(f"Los vértices deben estar estrictamente ordenados: {vertices}")
        object.__setattr__(self, "vertices", vertices)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex":
        return cls(tuple(sorted(set(vertices))))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def shortlex_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.vertices), self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.vertices

    def facets(self) -> Iterator["Simplex"]:
        """Caras de codimensión uno."""
        if len(self.vertices) < 2:
            return
        for drop in range(len(self.vertices)):
            yield Simplex(self.vertices[:drop] + self.vertices[drop + 1:])

    def faces(self) -> Iterator["Simplex"]:
        """Todas las caras propias no vacías."""
        for size in range(1, len(self.vertices)):
            for subset in combinations(self.vertices, size):
                yield Simplex(subset)

    def __repr__(self) -> str:
        return "{" + ",".join(str(v) for v in self.vertices) + "}"


def closure(simplices: Iterable[Simplex]) -> FrozenSet[Simplex]:
    """Clausura hacia abajo de una colección de símplices."""
    closed = set()
    for simplex in simplices:
        if simplex in closed:
            continue
        closed.add(simplex)
        closed.update(simplex.faces())
    return frozenset(closed)


@dataclass(frozen=True)
class LabelledComplex:
    """
    Complejo simplicial etiquetado: conjunto de símplices sobre un universo.
    La igualdad compara universo y símplices; `max_dim` es la cota m del modelo.
    """

    universe: ComponentUniverse
    simplices: FrozenSet[Simplex]
    max_dim: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "simplices", frozenset(self.simplices))

    # --- Constructores ---

    @classmethod
    def empty(cls, universe: ComponentUniverse, max_dim: int = 0) -> "LabelledComplex":
        return cls(universe, frozenset(), max_dim)

    @classmethod
    def from_labels(
        cls,
        universe: ComponentUniverse,
        simplices: Iterable[Iterable[str]],
        max_dim: Optional[int] = None,
    ) -> "LabelledComplex":
        converted = frozenset(Simplex.of(universe.indices(labels)) for labels in simplices)
        if max_dim is None:
            max_dim = max((s.dim for s in converted), default=0)
        return cls(universe, converted, max_dim)

    @classmethod
    def from_label_sets(
        cls,
        universe: ComponentUniverse,
        simplices: Iterable[LabelSet],
        max_dim: Optional[int] = None,
    ) -> "LabelledComplex":
        """Como from_labels, pero amplía el universo con las etiquetas nuevas (orden alfabético)."""
        simplices = [frozenset(s) for s in simplices]
        unknown = sorted({label for s in simplices for label in s if label not in universe})
        universe = universe.extended(unknown)
        converted = cls.from_labels(universe, simplices)
        if max_dim is None:
            max_dim = converted.max_dim
        return cls(universe, converted.simplices, max(max_dim, converted.dimension))

    # --- Consultas ---

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.sorted_simplices())

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.simplices

    @property
    def dimension(self) -> int:
        return max((s.dim for s in self.simplices), default=-1)

    @cached_property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for s in self.simplices for v in s.vertices)

    def sorted_simplices(self) -> List[Simplex]:
        return sorted(self.simplices, key=lambda s: s.shortlex_key)

    def counts_by_dim(self, up_to: Optional[int] = None) -> List[int]:
        top = self.dimension if up_to is None else up_to
        counts = [0] * (top + 1)
        for simplex in self.simplices:
            if simplex.dim <= top:
                counts[simplex.dim] += 1
        return counts

    def labels_of(self, simplex: Simplex) -> Tuple[str, ...]:
        return tuple(self.universe.label(v) for v in simplex.vertices)

    def label_sets(self) -> FrozenSet[LabelSet]:
        return frozenset(frozenset(self.labels_of(s)) for s in self.simplices)

    def vertex_labels(self) -> FrozenSet[str]:
        return frozenset(self.universe.label(v) for v in self.vertices)


# --- Operaciones del módulo ---

@dataclass(frozen=True)
class Violation:
    kind: str
    simplex: Optional[Simplex] = None
    missing: Optional[Simplex] = None

    def describe(self) -> str:
        if self.kind == "missing_face":
            return f"falta la cara {self.missing!r} de {self.simplex!r}"
        if self.kind == "vertex_out_of_range":
            return f"el símplice {self.simplex!r} usa vértices fuera del universo"
        if self.kind == "dimension_exceeds_max":
            return f"el símplice {self.simplex!r} supera la dimensión máxima"
        return self.kind


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def missing_faces(self) -> FrozenSet[Simplex]:
        return frozenset(v.missing for v in self.violations if v.kind == "missing_face")

    def describe(self) -> List[str]:
        return [violation.describe() for violation in self.violations]


def validate(complex_: LabelledComplex) -> ValidationReport:
    """Comprueba clausura hacia abajo, rango de vértices y cota de dimensión."""
    violations: List[Violation] = []
    if complex_.max_dim < 0:
        violations.append(Violation("negative_max_dim"))
    size = len(complex_.universe)
    for simplex in complex_.sorted_simplices():
        if simplex.vertices[-1] > size:
            violations.append(Violation("vertex_out_of_range", simplex))
        if simplex.dim > complex_.max_dim:
            violations.append(Violation("dimension_exceeds_max", simplex))
        for face in simplex.faces():
            if face not in complex_.simplices:
                violations.append(Violation("missing_face", simplex, face))
    return ValidationReport(tuple(violations))


def clique_complete(
    universe: ComponentUniverse,
    vertices: Iterable[int],
    edges: Iterable[Iterable[int]],
    max_dim: int,
) -> LabelledComplex:
    """
    Complejo bandera (de cliques) truncado en `max_dim`: un (k+1)-subconjunto
    es un k-símplice si todos sus pares son aristas y k <= max_dim.
    """
    if max_dim < 1:
        raise InputError(f"max_dim debe ser >= 1 para completar cliques (recibido {max_dim})")

    vertex_set = set(vertices)
    for vertex in vertex_set:
        if not 1 <= vertex <= len(universe):
            raise InputError(f"Vértice fuera del universo: {vertex}")

    graph = nx.Graph()
    graph.add_nodes_from(sorted(vertex_set))
    for edge in edges:
        pair = tuple(edge)
        if len(pair) != 2 or pair[0] == pair[1]:
            raise InputError(f"Arista inválida: {pair}")
        for endpoint in pair:
            if endpoint not in vertex_set:
                raise InputError(f"La arista {pair} referencia un vértice desconocido: {endpoint}")
        graph.add_edge(*pair)

    # enumerate_all_cliques entrega los cliques por tamaño creciente
    simplices = set()
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) > max_dim + 1:
            break
        simplices.add(Simplex.of(clique))

    result = LabelledComplex(universe, frozenset(simplices), max_dim)
    logger.debug(f"Complejo bandera: {result.counts_by_dim()} símplices por dimensión")
    return result


def skeleton(complex_: LabelledComplex, k: int) -> LabelledComplex:
    if k < 0:
        raise InputError(f"El esqueleto requiere k >= 0 (recibido {k})")
    kept = frozenset(s for s in complex_.simplices if s.dim <= k)
    return LabelledComplex(complex_.universe, kept, min(complex_.max_dim, k))


def _require_same_universe(K: LabelledComplex, L: LabelledComplex) -> None:
    if K.universe != L.universe:
        raise UniverseMismatchError(
            f"Universos distintos ({K.universe.fingerprint} vs {L.universe.fingerprint})"
        )


def symmetric_difference(K: LabelledComplex, L: LabelledComplex) -> FrozenSet[Simplex]:
    _require_same_universe(K, L)
    return frozenset(K.simplices ^ L.simplices)


def intersection(K: LabelledComplex, L: LabelledComplex) -> FrozenSet[Simplex]:
    _require_same_universe(K, L)
    return frozenset(K.simplices & L.simplices)


def neighbors(complex_: LabelledComplex, u: int) -> FrozenSet[int]:
    """V_K(u): vértices que comparten algún símplice con u."""
    if Simplex((u,)) not in complex_.simplices:
        raise InputError(f"El vértice {u} no pertenece al complejo")
    return frozenset(
        v for simplex in complex_.simplices if u in simplex for v in simplex.vertices if v != u
    )


def is_subcomplex(K: LabelledComplex, L: LabelledComplex) -> bool:
    """True si K ⊆ L como conjuntos de símplices etiquetados."""
    _require_same_universe(K, L)
    return K.simplices <= L.simplices


def relabel(complex_: LabelledComplex, universe: ComponentUniverse) -> LabelledComplex:
    """Traslada el complejo a otro universo que contiene sus etiquetas."""
    return LabelledComplex.from_labels(
        universe, (complex_.labels_of(s) for s in complex_.simplices), complex_.max_dim
    )

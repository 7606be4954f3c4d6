# backend/filtration.py - Filtraciones planas del complejo de referencia R^(m)
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.special import comb

from config import settings
from exceptions import FiltrationError, UniverseMismatchError
from simplicial import ComponentUniverse, LabelledComplex, Simplex

logger = logging.getLogger(__name__)


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def reference_size(n: int, m: int) -> int:
    """|R^(m)| = sum_{j=1}^{m+1} C(n, j)."""
    return sum(_binom(n, j) for j in range(1, m + 2))


def _lex_rank(vertices: Tuple[int, ...], n: int) -> int:
    # Sistema combinatorio de números sobre el complemento t = n - v
    k = len(vertices)
    colex = sum(_binom(n - v, k - i) for i, v in enumerate(vertices))
    return _binom(n, k) - 1 - colex


def _lex_unrank(position: int, n: int, k: int) -> Tuple[int, ...]:
    remainder = _binom(n, k) - 1 - position
    vertices = []
    upper = n - 1
    for i in range(k):
        j = k - i
        t = upper
        while _binom(t, j) > remainder:
            t -= 1
        vertices.append(n - t)
        remainder -= _binom(t, j)
        upper = t - 1
    return tuple(vertices)


def _check_simplex(simplex: Simplex, n: int, m: int) -> None:
    if simplex.dim > m:
        raise FiltrationError(f"El símplice {simplex!r} tiene dimensión {simplex.dim} > m = {m}")
    if simplex.vertices[-1] > n:
        raise FiltrationError(f"El símplice {simplex!r} tiene vértices fuera del universo (n = {n})")


def shortlex_rank(simplex: Simplex, universe: ComponentUniverse, m: int) -> int:
    """Posición 1-based del símplice en el orden shortlex de R^(m), en forma cerrada."""
    n = len(universe)
    _check_simplex(simplex, n, m)
    k = len(simplex)
    offset = sum(_binom(n, j) for j in range(1, k))
    return offset + _lex_rank(simplex.vertices, n) + 1


def shortlex_unrank(rank: int, universe: ComponentUniverse, m: int) -> Simplex:
    n = len(universe)
    size = reference_size(n, m)
    if not 1 <= rank <= size:
        raise FiltrationError(f"Rango {rank} fuera de [1, {size}]")
    offset = 0
    for k in range(1, m + 2):
        block = _binom(n, k)
        if rank <= offset + block:
            return Simplex(_lex_unrank(rank - offset - 1, n, k))
        offset += block
    raise FiltrationError(f"Rango {rank} fuera de [1, {size}]")


class FiltrationOrder:
    """
    Función de peso de una filtración plana de R^(m): biyección rank/unrank
    entre los símplices de R^(m) y [1, |R^(m)|], monótona respecto a las caras.
    """

    kind = "abstract"

    def __init__(self, universe: ComponentUniverse, max_dim: int, seed: Optional[int] = None):
        if max_dim < 0:
            raise FiltrationError(f"m debe ser >= 0 (recibido {max_dim})")
        self.universe = universe
        self.max_dim = max_dim
        self.seed = seed
        self.size = reference_size(len(universe), max_dim)

    @property
    def fingerprint(self) -> str:
        return f"{self.universe.fingerprint}:{self.kind}:m{self.max_dim}:seed{self.seed}"

    def rank(self, simplex: Simplex) -> int:
        raise NotImplementedError

    def unrank(self, rank: int) -> Simplex:
        raise NotImplementedError

    def check_simplex(self, simplex: Simplex) -> None:
        _check_simplex(simplex, len(self.universe), self.max_dim)

    def check_rank(self, rank: int) -> None:
        if not 1 <= rank <= self.size:
            raise FiltrationError(f"Rango {rank} fuera de [1, {self.size}]")

    def simplices(self) -> Iterator[Simplex]:
        """Recorre R^(m) en orden de filtración (solo para referencias pequeñas)."""
        for rank in range(1, self.size + 1):
            yield self.unrank(rank)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.fingerprint} |R|={self.size}>"


class ShortlexOrder(FiltrationOrder):
    kind = "shortlex"

    def rank(self, simplex: Simplex) -> int:
        return shortlex_rank(simplex, self.universe, self.max_dim)

    def unrank(self, rank: int) -> Simplex:
        return shortlex_unrank(rank, self.universe, self.max_dim)


class LinearExtensionOrder(FiltrationOrder):
    """Extensión lineal pseudoaleatoria de R^(m), materializada."""

    kind = "permuted"

    def __init__(self, base: FiltrationOrder, seed: int):
        super().__init__(base.universe, base.max_dim, seed)
        self.base_fingerprint = base.fingerprint
        self._order: List[Simplex] = self._draw(base, seed)
        self._ranks: Dict[Simplex, int] = {s: r for r, s in enumerate(self._order, start=1)}

    @property
    def fingerprint(self) -> str:
        return f"{self.base_fingerprint}>permuted:seed{self.seed}"

    def _draw(self, base: FiltrationOrder, seed: int) -> List[Simplex]:
        simplices = list(base.simplices())
        index = {s: i for i, s in enumerate(simplices)}
        priority = np.random.default_rng(seed).permutation(len(simplices))
        pending = [s.dim + 1 if s.dim > 0 else 0 for s in simplices]
        heap = [(int(priority[i]), i) for i, s in enumerate(simplices) if s.dim == 0]
        heapq.heapify(heap)

        n = len(self.universe)
        order: List[Simplex] = []
        while heap:
            _, i = heapq.heappop(heap)
            simplex = simplices[i]
            order.append(simplex)
            if simplex.dim >= self.max_dim:
                continue
            for vertex in range(1, n + 1):
                if vertex in simplex:
                    continue
                j = index[Simplex.of(simplex.vertices + (vertex,))]
                pending[j] -= 1
                if pending[j] == 0:
                    heapq.heappush(heap, (int(priority[j]), j))
        return order

    def rank(self, simplex: Simplex) -> int:
        self.check_simplex(simplex)
        return self._ranks[simplex]

    def unrank(self, rank: int) -> Simplex:
        self.check_rank(rank)
        return self._order[rank - 1]


class RelabelledShortlexOrder(FiltrationOrder):
    """Shortlex sobre una permutación pseudoaleatoria de los vértices; perezoso."""

    kind = "permuted"

    def __init__(self, base: FiltrationOrder, seed: int):
        super().__init__(base.universe, base.max_dim, seed)
        self.base_fingerprint = base.fingerprint
        n = len(self.universe)
        permutation = np.random.default_rng(seed).permutation(n) + 1
        # _position[v] = vértice en el orden permutado; _vertex es su inversa
        self._position = {old: int(new) for old, new in zip(range(1, n + 1), permutation)}
        self._vertex = {new: old for old, new in self._position.items()}

    @property
    def fingerprint(self) -> str:
        return f"{self.base_fingerprint}>permuted:seed{self.seed}"

    def rank(self, simplex: Simplex) -> int:
        self.check_simplex(simplex)
        moved = Simplex.of(self._position[v] for v in simplex.vertices)
        return shortlex_rank(moved, self.universe, self.max_dim)

    def unrank(self, rank: int) -> Simplex:
        moved = shortlex_unrank(rank, self.universe, self.max_dim)
        return Simplex.of(self._vertex[v] for v in moved.vertices)


def permuted_order(base: FiltrationOrder, seed: int) -> FiltrationOrder:
    """
    Filtración plana pseudoaleatoria y reproducible a partir de la semilla.
    Solo la biyectividad y la monotonía respecto a caras son contractuales.
    """
    if base.size <= settings.MODELHOM_MATERIALIZE_LIMIT:
        return LinearExtensionOrder(base, seed)
    logger.info(
        f"R^({base.max_dim}) tiene {base.size} símplices; se usa una permutación de vértices"
    )
    return RelabelledShortlexOrder(base, seed)


class ExtendedOrder(FiltrationOrder):
    """
    Extensión de una filtración a un universo mayor: los símplices antiguos
    ocupan los rangos 1..|R_antiguo| en su orden original y los nuevos siguen
    en orden shortlex del universo ampliado.
    """

    kind = "extended"

    def __init__(self, base: FiltrationOrder, universe: ComponentUniverse, max_dim: int):
        super().__init__(universe, max_dim, base.seed)
        self.base = base
        self._old_n = len(base.universe)
        self._old_m = base.max_dim

    @property
    def fingerprint(self) -> str:
        return f"{self.base.fingerprint}>extended:{self.universe.fingerprint}:m{self.max_dim}"

    def _is_old(self, simplex: Simplex) -> bool:
        return simplex.vertices[-1] <= self._old_n and simplex.dim <= self._old_m

    def _old_before(self, simplex: Simplex) -> int:
        """Símplices antiguos que preceden a `simplex` en el shortlex ampliado."""
        k = len(simplex)
        n = self._old_n
        count = sum(_binom(n, j) for j in range(1, min(k - 1, self._old_m + 1) + 1))
        if k > self._old_m + 1:
            return count
        previous = 0
        for i, vertex in enumerate(simplex.vertices):
            for t in range(previous + 1, min(vertex - 1, n) + 1):
                count += _binom(n - t, k - i - 1)
            if vertex > n:
                break
            previous = vertex
        return count

    def rank(self, simplex: Simplex) -> int:
        self.check_simplex(simplex)
        if self._is_old(simplex):
            return self.base.rank(simplex)
        large = shortlex_rank(simplex, self.universe, self.max_dim)
        return self.base.size + large - self._old_before(simplex)

    def _new_upto(self, large_rank: int) -> int:
        simplex = shortlex_unrank(large_rank, self.universe, self.max_dim)
        old = self._old_before(simplex) + (1 if self._is_old(simplex) else 0)
        return large_rank - old

    def unrank(self, rank: int) -> Simplex:
        self.check_rank(rank)
        if rank <= self.base.size:
            return self.base.unrank(rank)
        target = rank - self.base.size
        # Búsqueda binaria del menor rango shortlex con `target` símplices nuevos
        low, high = 1, self.size
        while low < high:
            middle = (low + high) // 2
            if self._new_upto(middle) >= target:
                high = middle
            else:
                low = middle + 1
        return shortlex_unrank(low, self.universe, self.max_dim)


def extend_universe(
    order: FiltrationOrder, larger_universe: ComponentUniverse, max_dim: Optional[int] = None
) -> FiltrationOrder:
    max_dim = order.max_dim if max_dim is None else max_dim
    if not order.universe.is_prefix_of(larger_universe):
        raise FiltrationError("El universo ampliado no conserva el orden del universo original")
    if max_dim < order.max_dim:
        raise FiltrationError(f"m' = {max_dim} es menor que m = {order.max_dim}")
    if larger_universe == order.universe and max_dim == order.max_dim:
        return order
    return ExtendedOrder(order, larger_universe, max_dim)


@dataclass(frozen=True)
class InducedFiltration:
    """Filtración inducida sobre un subcomplejo: un símplice por paso, rangos crecientes."""

    complex: LabelledComplex
    fingerprint: str
    steps: Tuple[Tuple[int, Simplex], ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(rank for rank, _ in self.steps)

    def positions(self) -> Tuple[Tuple[int, int, Simplex], ...]:
        """(posición comprimida 1..|K|, rango en R^(m), símplice)."""
        return tuple((i, rank, s) for i, (rank, s) in enumerate(self.steps, start=1))

    def prefix(self, length: int) -> LabelledComplex:
        return LabelledComplex(
            self.complex.universe,
            frozenset(s for _, s in self.steps[:length]),
            self.complex.max_dim,
        )


def induce(complex_: LabelledComplex, order: FiltrationOrder) -> InducedFiltration:
    if not complex_.universe.is_prefix_of(order.universe):
        raise UniverseMismatchError(
            "El complejo no está definido sobre el universo de la filtración "
            f"({complex_.universe.fingerprint} vs {order.universe.fingerprint})"
        )
    if complex_.dimension > order.max_dim:
        raise FiltrationError(
            f"El complejo tiene dimensión {complex_.dimension} > m = {order.max_dim}"
        )
    steps = sorted(((order.rank(s), s) for s in complex_.simplices), key=lambda step: step[0])
    return InducedFiltration(complex_, order.fingerprint, tuple(steps))


@dataclass(frozen=True)
class OrderAudit:
    bijective: bool
    face_monotone: bool
    size: int

    @property
    def ok(self) -> bool:
        return self.bijective and self.face_monotone


def audit_order(order: FiltrationOrder) -> OrderAudit:
    """Auditoría exhaustiva de biyectividad y monotonía (solo referencias pequeñas)."""
    if order.size > settings.MODELHOM_MATERIALIZE_LIMIT:
        raise FiltrationError(f"R^({order.max_dim}) demasiado grande para auditar: {order.size}")
    seen = set()
    bijective = True
    face_monotone = True
    for rank in range(1, order.size + 1):
        simplex = order.unrank(rank)
        if simplex in seen or order.rank(simplex) != rank:
            bijective = False
        seen.add(simplex)
        if any(order.rank(face) >= rank for face in simplex.facets()):
            face_monotone = False
    return OrderAudit(bijective and len(seen) == order.size, face_monotone, order.size)

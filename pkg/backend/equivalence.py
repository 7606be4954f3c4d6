# backend/equivalence.py - Operaciones admisibles, verificación de guiones y búsqueda de equivalencias
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from itertools import combinations, islice, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from config import settings
from exceptions import (
    InputError,
    NonInvertibleError,
    OperationError,
    SearchBudgetError,
)
from simplicial import LabelledComplex, LabelSet

logger = logging.getLogger(__name__)

LabelComplex = FrozenSet[LabelSet]
MODES = ("strict", "quotient")


# --- Declaración de conceptos equivalentes ---

@dataclass(frozen=True)
class ConceptDeclaration:
    """Clases disjuntas de etiquetas consideradas conceptualmente equivalentes."""

    classes: Tuple[FrozenSet[str], ...] = ()
    name: str = ""
    _class_index: Dict[str, FrozenSet[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        classes = tuple(frozenset(c) for c in self.classes)
        index: Dict[str, FrozenSet[str]] = {}
        for concept in classes:
            for label in concept:
                if label in index:
                    raise InputError(f"La etiqueta {label!r} aparece en más de una clase")
                index[label] = concept
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "_class_index", index)

    @classmethod
    def from_lists(cls, classes: Iterable[Iterable[str]], name: str = "") -> "ConceptDeclaration":
        return cls(tuple(frozenset(c) for c in classes), name)

    def class_of(self, label: str) -> FrozenSet[str]:
        return self._class_index.get(label, frozenset({label}))

    def same_class(self, *labels: str) -> bool:
        return all(label in self.class_of(labels[0]) for label in labels[1:])

    @property
    def labels(self) -> FrozenSet[str]:
        return frozenset(self._class_index)


# --- Operaciones ---

@dataclass(frozen=True)
class IdentifyAdjacent:
    u: str
    v: str
    target: str

    variant = 1
    op_name = "identify_adjacent"

    def labels(self) -> Tuple[str, ...]:
        return (self.u, self.v, self.target)

    def to_step(self) -> dict:
        return {"op": self.op_name, "target": self.target, "u": self.u, "v": self.v}

    def describe(self) -> str:
        return f"{self.op_name}({self.u}, {self.v} -> {self.target})"


@dataclass(frozen=True)
class IdentifyNonadjacent:
    """Identificación de vértices no adyacentes; varios grupos a la vez solo en modo cociente."""

    groups: Tuple[Tuple[Tuple[str, ...], str], ...]

    variant = 2
    op_name = "identify_nonadjacent"

    def __post_init__(self):
        groups = tuple(
            (tuple(sorted(set(members))), target)
            for members, target in sorted(self.groups, key=lambda g: (g[1], sorted(g[0])))
        )
        object.__setattr__(self, "groups", groups)

    @classmethod
    def pair(cls, u: str, v: str, target: str) -> "IdentifyNonadjacent":
        return cls((((u, v), target),))

    @property
    def is_batched(self) -> bool:
        return len(self.groups) > 1 or any(len(members) > 2 for members, _ in self.groups)

    def mapping(self) -> Dict[str, str]:
        return {member: target for members, target in self.groups for member in members}

    def labels(self) -> Tuple[str, ...]:
        return tuple(
            label for members, target in self.groups for label in members + (target,)
        )

    def to_step(self) -> dict:
        if not self.is_batched:
            (members, target), = self.groups
            return {"op": self.op_name, "target": target, "u": members[0], "v": members[1]}
        return {
            "groups": [{"members": list(members), "target": target} for members, target in self.groups],
            "op": self.op_name,
        }

    def describe(self) -> str:
        parts = "; ".join(f"{', '.join(m)} -> {t}" for m, t in self.groups)
        return f"{self.op_name}({parts})"


@dataclass(frozen=True)
class Split:
    u: str
    targets: Tuple[str, str]

    variant = 3
    op_name = "split"

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))

    def labels(self) -> Tuple[str, ...]:
        return (self.u,) + self.targets

    def to_step(self) -> dict:
        return {"op": self.op_name, "targets": list(self.targets), "u": self.u}

    def describe(self) -> str:
        return f"{self.op_name}({self.u} -> {', '.join(self.targets)})"


@dataclass(frozen=True)
class Include:
    simplices: FrozenSet[LabelSet]

    variant = 4
    op_name = "include"

    def __post_init__(self):
        object.__setattr__(self, "simplices", frozenset(frozenset(s) for s in self.simplices))

    def labels(self) -> Tuple[str, ...]:
        return tuple(sorted({label for s in self.simplices for label in s}))

    def to_step(self) -> dict:
        return {"op": self.op_name, "simplices": [list(s) for s in _sorted_sets(self.simplices)]}

    def describe(self) -> str:
        return f"{self.op_name}({len(self.simplices)} símplices: {', '.join(self.labels())})"


@dataclass(frozen=True)
class Substitute:
    u: str
    target: str

    variant = 5
    op_name = "substitute"

    def labels(self) -> Tuple[str, ...]:
        return (self.u, self.target)

    def to_step(self) -> dict:
        return {"op": self.op_name, "target": self.target, "u": self.u}

    def describe(self) -> str:
        return f"{self.op_name}({self.u} -> {self.target})"


EquivalenceOp = Union[IdentifyAdjacent, IdentifyNonadjacent, Split, Include, Substitute]


# --- Utilidades sobre complejos a nivel de etiquetas ---

def _sorted_sets(simplices: Iterable[LabelSet]) -> List[Tuple[str, ...]]:
    return sorted((tuple(sorted(s)) for s in simplices), key=lambda s: (len(s), s))


def canonical_form(simplices: Iterable[LabelSet]) -> Tuple[Tuple[str, ...], ...]:
    return tuple(_sorted_sets(simplices))


def complex_fingerprint(complex_: Union[LabelledComplex, LabelComplex]) -> str:
    simplices = complex_.label_sets() if isinstance(complex_, LabelledComplex) else complex_
    text = "\n".join("\t".join(s) for s in canonical_form(simplices))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _vertex_labels(simplices: LabelComplex) -> FrozenSet[str]:
    return frozenset(label for s in simplices if len(s) == 1 for label in s)


def _neighbors(simplices: LabelComplex, u: str) -> FrozenSet[str]:
    return frozenset(label for s in simplices if u in s for label in s if label != u)


def _link_avoiding(simplices: LabelComplex, u: str, other: str) -> FrozenSet[LabelSet]:
    """{W : W ∪ {u} ∈ K, W no vacío, other ∉ W}."""
    return frozenset(s - {u} for s in simplices if u in s and len(s) > 1 and other not in s)


def _is_closed(simplices: LabelComplex) -> bool:
    return all(s - {label} in simplices for s in simplices if len(s) > 1 for label in s)


def _image(simplices: LabelComplex, mapping: Dict[str, str]) -> LabelComplex:
    return frozenset(frozenset(mapping.get(label, label) for label in s) for s in simplices)


# --- Admisibilidad ---

@dataclass(frozen=True)
class AdmissibilityReport:
    op: EquivalenceOp
    reasons: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.reasons


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InputError(f"Modo desconocido: {mode!r} (use strict o quotient)")


def _structural_reasons(simplices: LabelComplex, op: EquivalenceOp, mode: str) -> List[str]:
    vertices = _vertex_labels(simplices)
    reasons: List[str] = []

    if isinstance(op, IdentifyAdjacent):
        u, v, c = op.u, op.v, op.target
        if u == v:
            return [f"{u!r} y {v!r} deben ser vértices distintos"]
        missing = [x for x in (u, v) if x not in vertices]
        if missing:
            return [f"{x!r} no es un vértice del complejo" for x in missing]
        if frozenset({u, v}) not in simplices:
            reasons.append(f"{u!r} y {v!r} no son adyacentes")
        if _neighbors(simplices, u) - {v} != _neighbors(simplices, v) - {u}:
            reasons.append(f"V({u}) \\ {{{v}}} != V({v}) \\ {{{u}}}")
        elif _link_avoiding(simplices, u, v) != _link_avoiding(simplices, v, u):
            reasons.append(f"W ∪ {{{u}}} y W ∪ {{{v}}} no generan los mismos símplices")
        if c in vertices and c not in (u, v):
            reasons.append(f"el destino {c!r} ya es un vértice del complejo")

    elif isinstance(op, IdentifyNonadjacent):
        if op.is_batched and mode == "strict":
            return ["la identificación por grupos solo se admite en modo cociente"]
        seen: set = set()
        targets: set = set()
        for members, target in op.groups:
            if len(members) < 2:
                reasons.append(f"el grupo {members} necesita al menos dos vértices")
            for member in members:
                if member not in vertices:
                    reasons.append(f"{member!r} no es un vértice del complejo")
                if member in seen:
                    reasons.append(f"{member!r} aparece en más de un grupo")
                seen.add(member)
            if target in targets:
                reasons.append(f"el destino {target!r} se repite entre grupos")
            targets.add(target)
            for a, b in combinations(members, 2):
                if frozenset({a, b}) in simplices:
                    reasons.append(f"{a!r} y {b!r} son adyacentes")
        for members, target in op.groups:
            if target in vertices and target not in members:
                reasons.append(f"el destino {target!r} ya es un vértice del complejo")
        if not reasons and mode == "strict":
            (u, v), _ = op.groups[0]
            if _neighbors(simplices, u) != _neighbors(simplices, v):
                reasons.append(f"V({u}) != V({v})")
            elif _link_avoiding(simplices, u, v) != _link_avoiding(simplices, v, u):
                reasons.append(f"W ∪ {{{u}}} y W ∪ {{{v}}} no generan los mismos símplices")

    elif isinstance(op, Split):
        c, d = op.targets
        if op.u not in vertices:
            reasons.append(f"{op.u!r} no es un vértice del complejo")
        if c == d:
            reasons.append("los destinos de la división deben ser distintos")
        for target in (c, d):
            if target in vertices:
                reasons.append(f"el destino {target!r} ya es un vértice del complejo")

    elif isinstance(op, Include):
        if not op.simplices:
            reasons.append("la inclusión no añade símplices")
        elif op.simplices & simplices:
            reasons.append("la inclusión repite símplices existentes")
        elif not _is_closed(simplices | op.simplices):
            reasons.append("K ∪ añadidos no es un complejo simplicial")

    elif isinstance(op, Substitute):
        if op.u not in vertices:
            reasons.append(f"{op.u!r} no es un vértice del complejo")
        if op.target in vertices and op.target != op.u:
            reasons.append(f"el destino {op.target!r} ya es un vértice del complejo")

    else:
        raise InputError(f"Operación desconocida: {op!r}")
    return reasons


def _conceptual_reasons(
    simplices: LabelComplex, op: EquivalenceOp, decl: Optional[ConceptDeclaration]
) -> List[str]:
    if decl is None:
        return []
    if isinstance(op, Include):
        vertices = _vertex_labels(simplices)
        fresh = sorted({label for s in op.simplices for label in s} - vertices)
        return [
            f"{label!r} no comparte clase con ningún vértice del complejo"
            for label in fresh
            if not decl.class_of(label) & vertices
        ]
    if isinstance(op, IdentifyNonadjacent):
        return [
            f"{', '.join(members)} -> {target} no pertenecen a una misma clase"
            for members, target in op.groups
            if not decl.same_class(target, *members)
        ]
    if not decl.same_class(*op.labels()):
        return [f"{', '.join(op.labels())} no pertenecen a una misma clase declarada"]
    return []


def check_admissible(
    K: LabelledComplex,
    op: EquivalenceOp,
    decl: Optional[ConceptDeclaration] = None,
    mode: str = "strict",
) -> AdmissibilityReport:
    """
    Condiciones estructurales de la operación y, si hay declaración, que todas
    las etiquetas implicadas compartan clase. Sin declaración solo se comprueba
    la estructura. Las violaciones se devuelven, no se lanzan.
    """
    _check_mode(mode)
    simplices = K.label_sets()
    reasons = _structural_reasons(simplices, op, mode) + _conceptual_reasons(simplices, op, decl)
    return AdmissibilityReport(op, tuple(reasons))


# --- Aplicación ---

def _apply_sets(simplices: LabelComplex, op: EquivalenceOp) -> LabelComplex:
    if isinstance(op, IdentifyAdjacent):
        return _image(simplices, {op.u: op.target, op.v: op.target})
    if isinstance(op, IdentifyNonadjacent):
        return _image(simplices, op.mapping())
    if isinstance(op, Split):
        pair = frozenset(op.targets)
        result = set()
        for s in simplices:
            if op.u not in s:
                result.add(s)
                continue
            top = (s - {op.u}) | pair
            for size in range(1, len(top) + 1):
                result.update(frozenset(face) for face in combinations(sorted(top), size))
        return frozenset(result)
    if isinstance(op, Include):
        return simplices | op.simplices
    if isinstance(op, Substitute):
        return _image(simplices, {op.u: op.target})
    raise InputError(f"Operación desconocida: {op!r}")


def apply(
    K: LabelledComplex,
    op: EquivalenceOp,
    decl: Optional[ConceptDeclaration] = None,
    mode: str = "strict",
) -> LabelledComplex:
    report = check_admissible(K, op, decl, mode)
    if not report.ok:
        raise OperationError(f"{op.describe()} no es admisible: {'; '.join(report.reasons)}")
    result = _apply_sets(K.label_sets(), op)
    return LabelledComplex.from_label_sets(K.universe, result, K.max_dim)


# --- Inversión ---

def _include_inverse(
    before: LabelComplex,
    op: Include,
    decl: Optional[ConceptDeclaration],
    mode: str,
) -> Optional[IdentifyNonadjacent]:
    """Busca una identificación no adyacente que deshaga la inclusión."""
    after = before | op.simplices
    vertices = _vertex_labels(before)
    fresh = sorted(_vertex_labels(after) - vertices)
    if not fresh:
        return None
    if mode == "strict" and len(fresh) != 1:
        return None

    candidates = []
    for label in fresh:
        pool = vertices if decl is None else decl.class_of(label) & vertices
        candidates.append(sorted(pool))

    for assignment in islice(product(*candidates), settings.MODELHOM_INVERT_CANDIDATES):
        groups: Dict[str, List[str]] = {}
        for label, target in zip(fresh, assignment):
            groups.setdefault(target, [target]).append(label)
        inverse = IdentifyNonadjacent(tuple((tuple(m), t) for t, m in groups.items()))
        if _structural_reasons(after, inverse, mode) or _conceptual_reasons(after, inverse, decl):
            continue
        if _apply_sets(after, inverse) == before:
            return inverse
    return None


def _identification_inverse(
    before: LabelComplex, op: IdentifyNonadjacent, mode: str
) -> Optional[List[EquivalenceOp]]:
    """
    Los grupos con destino nuevo se devuelven primero a uno de sus miembros
    (solo en modo cociente); después una inclusión restituye el resto.
    """
    fresh_groups = [(members, target) for members, target in op.groups if target not in members]
    if fresh_groups and mode == "strict":
        return None
    representative = {
        member: target if target in members else members[0]
        for members, target in op.groups
        for member in members
    }
    added = before - _image(before, representative)
    if not added:
        return None
    steps: List[EquivalenceOp] = [Substitute(target, members[0]) for members, target in fresh_groups]
    steps.append(Include(added))
    return steps


def _inverse_of(
    before: LabelComplex,
    op: EquivalenceOp,
    decl: Optional[ConceptDeclaration],
    mode: str,
) -> Optional[List[EquivalenceOp]]:
    if isinstance(op, Substitute):
        return [Substitute(op.target, op.u)]
    if isinstance(op, Split):
        return [IdentifyAdjacent(op.targets[0], op.targets[1], op.u)]
    if isinstance(op, IdentifyAdjacent):
        if op.target in (op.u, op.v):
            return None
        return [Split(op.target, (op.u, op.v))]
    if isinstance(op, IdentifyNonadjacent):
        return _identification_inverse(before, op, mode)
    if isinstance(op, Include):
        inverse = _include_inverse(before, op, decl, mode)
        return [inverse] if inverse is not None else None
    return None


def _replay(
    simplices: LabelComplex,
    steps: Sequence[EquivalenceOp],
    decl: Optional[ConceptDeclaration],
    mode: str,
) -> Optional[LabelComplex]:
    """Aplica los pasos en orden; None si alguno no es admisible."""
    current = simplices
    for step in steps:
        if _structural_reasons(current, step, mode) or _conceptual_reasons(current, step, decl):
            return None
        current = _apply_sets(current, step)
    return current


def invert(
    op: EquivalenceOp,
    before: LabelledComplex,
    decl: Optional[ConceptDeclaration] = None,
    mode: str = "strict",
) -> List[EquivalenceOp]:
    """
    Devuelve los pasos que deshacen `op` aplicada sobre `before`: uno solo salvo
    para identificaciones por grupos con destino nuevo. Cada paso debe ser
    admisible y la vuelta debe reconstruir `before` exactamente.
    """
    _check_mode(mode)
    simplices = before.label_sets()
    report = check_admissible(before, op, decl, mode)
    if not report.ok:
        raise OperationError(f"{op.describe()} no es admisible: {'; '.join(report.reasons)}")

    inverse = _inverse_of(simplices, op, decl, mode)
    if inverse is None:
        raise NonInvertibleError(f"{op.describe()} no tiene inversa en este contexto")
    described = ", ".join(step.describe() for step in inverse)
    restored = _replay(_apply_sets(simplices, op), inverse, decl, mode)
    if restored is None:
        raise NonInvertibleError(f"La inversa {described} no es admisible tras {op.describe()}")
    if restored != simplices:
        raise NonInvertibleError(
            f"{described} no reconstruye el complejo original tras {op.describe()}"
        )
    return inverse


# --- Guiones ---

@dataclass(frozen=True)
class TraceStep:
    index: int
    description: str
    fingerprint: str
    ok: bool = True
    reason: str = ""

    def render(self) -> str:
        status = "ok" if self.ok else f"rechazado: {self.reason}"
        return f"{self.index}\t{self.fingerprint}\t{self.description}\t{status}"


@dataclass(frozen=True)
class ScriptVerdict:
    accepted: bool
    trace: Tuple[TraceStep, ...]
    failed_step: Optional[int] = None
    reason: str = ""

    def render(self) -> List[str]:
        return [step.render() for step in self.trace]


def verify_script(
    K: LabelledComplex,
    script: Sequence[EquivalenceOp],
    L: LabelledComplex,
    decl: Optional[ConceptDeclaration] = None,
    mode: str = "strict",
) -> ScriptVerdict:
    """Acepta si cada paso es admisible e invertible y el resultado final es L."""
    _check_mode(mode)
    current = K
    trace = [TraceStep(0, "inicio", complex_fingerprint(current))]

    for index, op in enumerate(script, start=1):
        report = check_admissible(current, op, decl, mode)
        if not report.ok:
            reason = "; ".join(report.reasons)
            trace.append(TraceStep(index, op.describe(), complex_fingerprint(current), False, reason))
            return ScriptVerdict(False, tuple(trace), index, reason)
        try:
            invert(op, current, decl, mode)
        except NonInvertibleError as e:
            trace.append(TraceStep(index, op.describe(), complex_fingerprint(current), False, str(e)))
            return ScriptVerdict(False, tuple(trace), index, str(e))
        current = apply(current, op, decl, mode)
        trace.append(TraceStep(index, op.describe(), complex_fingerprint(current)))

    if current.label_sets() != L.label_sets():
        difference = len(current.label_sets() ^ L.label_sets())
        reason = f"el complejo final difiere del objetivo en {difference} símplices"
        return ScriptVerdict(False, tuple(trace), None, reason)
    logger.info(f"Guion de {len(script)} pasos aceptado ({mode})")
    return ScriptVerdict(True, tuple(trace))


def invert_script(
    K: LabelledComplex,
    script: Sequence[EquivalenceOp],
    decl: Optional[ConceptDeclaration] = None,
    mode: str = "strict",
) -> List[EquivalenceOp]:
    """Guion inverso: las inversas de cada paso en orden contrario."""
    current = K
    inverses = []
    for op in script:
        inverses.append(invert(op, current, decl, mode))
        current = apply(current, op, decl, mode)
    return [step for steps in reversed(inverses) for step in steps]


# --- Búsqueda acotada ---

@dataclass(frozen=True)
class SearchResult:
    found: bool
    script: Tuple[EquivalenceOp, ...] = ()
    expanded: int = 0
    max_ops: int = 0

    def describe(self) -> str:
        if self.found:
            return f"equivalencia encontrada con {len(self.script)} operaciones"
        return f"no encontrada con a lo sumo {self.max_ops} operaciones"


def _remaining_lower_bound(vertices: FrozenSet[str], goal: FrozenSet[str]) -> int:
    # Cada operación propuesta elimina o introduce como mucho dos etiquetas
    extra = len(vertices - goal)
    missing = len(goal - vertices)
    return max((extra + 1) // 2, (missing + 1) // 2)


def _proposals(
    simplices: LabelComplex, decl: ConceptDeclaration, mode: str
) -> Iterator[EquivalenceOp]:
    vertices = sorted(_vertex_labels(simplices))

    def fresh(label: str) -> List[str]:
        return sorted(decl.class_of(label) - set(vertices))

    for u, v in combinations(vertices, 2):
        if not decl.same_class(u, v):
            continue
        if frozenset({u, v}) in simplices:
            for target in fresh(u):
                yield IdentifyAdjacent(u, v, target)
    for u, v in combinations(vertices, 2):
        if decl.same_class(u, v) and frozenset({u, v}) not in simplices:
            yield IdentifyNonadjacent.pair(u, v, u)
            yield IdentifyNonadjacent.pair(u, v, v)
    for u in vertices:
        for c, d in combinations(fresh(u), 2):
            yield Split(u, (c, d))
    for u in vertices:
        for c in fresh(u):
            copies = frozenset((s - {u}) | {c} for s in simplices if u in s)
            yield Include(copies)
    for u in vertices:
        for c in fresh(u):
            yield Substitute(u, c)


def search_equivalence(
    K: LabelledComplex,
    L: LabelledComplex,
    decl: ConceptDeclaration,
    max_ops: int,
    mode: str = "strict",
    budget: Optional[int] = None,
) -> SearchResult:
    """
    Búsqueda en anchura de un guion admisible e invertible de K a L. Nunca
    afirma la no equivalencia: solo informa de la ausencia dentro de la cota.
    """
    _check_mode(mode)
    if max_ops < 0:
        raise InputError(f"max_ops debe ser >= 0 (recibido {max_ops})")
    budget = settings.MODELHOM_SEARCH_BUDGET if budget is None else budget

    start = K.label_sets()
    goal = L.label_sets()
    if start == goal:
        return SearchResult(True, (), 0, max_ops)

    goal_vertices = _vertex_labels(goal)
    reachable = frozenset(x for label in _vertex_labels(start) for x in decl.class_of(label))
    if not goal_vertices <= reachable:
        logger.info(
            f"Etiquetas de L inalcanzables desde K: {sorted(goal_vertices - reachable)}"
        )
        return SearchResult(False, (), 0, max_ops)

    visited = {canonical_form(start)}
    frontier: List[Tuple[LabelComplex, Tuple[EquivalenceOp, ...]]] = [(start, ())]
    expanded = 0

    for depth in range(max_ops):
        next_frontier = []
        for simplices, path in frontier:
            expanded += 1
            if expanded > budget:
                raise SearchBudgetError(
                    f"Presupuesto de búsqueda agotado ({budget} estados)", expanded
                )
            for op in _proposals(simplices, decl, mode):
                if _structural_reasons(simplices, op, mode):
                    continue
                if _conceptual_reasons(simplices, op, decl):
                    continue
                child = _apply_sets(simplices, op)
                key = canonical_form(child)
                if key in visited:
                    continue
                if depth + 1 + _remaining_lower_bound(_vertex_labels(child), goal_vertices) > max_ops:
                    continue
                inverse = _inverse_of(simplices, op, decl, mode)
                if inverse is None or _replay(child, inverse, decl, mode) != simplices:
                    continue
                visited.add(key)
                if child == goal:
                    logger.info(f"Equivalencia encontrada en profundidad {depth + 1}")
                    return SearchResult(True, path + (op,), expanded, max_ops)
                next_frontier.append((child, path + (op,)))
        logger.debug(f"Profundidad {depth + 1}: {len(next_frontier)} estados en la frontera")
        frontier = next_frontier
        if not frontier:
            break
    return SearchResult(False, (), expanded, max_ops)

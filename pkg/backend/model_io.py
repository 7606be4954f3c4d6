# backend/model_io.py - Formatos de modelo, universo, declaración y guion
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

from pydantic import TypeAdapter, ValidationError

from equivalence import (
    ConceptDeclaration,
    EquivalenceOp,
    IdentifyAdjacent,
    IdentifyNonadjacent,
    Include,
    Split,
    Substitute,
)
from exceptions import InputError, ParseError
from models import (
    DeclarationDocument,
    IdentifyAdjacentStep,
    IdentifyNonadjacentStep,
    IncludeStep,
    ModelDocument,
    ScriptStep,
    SplitStep,
    SubstituteStep,
    UniverseDocument,
)
from simplicial import (
    ComponentUniverse,
    LabelledComplex,
    Simplex,
    clique_complete,
    closure,
)

logger = logging.getLogger(__name__)

Source = Union[bytes, str]

_script_adapter = TypeAdapter(List[ScriptStep])


# --- JSON canónico ---

def _is_scalar(value: Any) -> bool:
    return not isinstance(value, (dict, list))


def _render(value: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    closing = "  " * depth
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_render(v, depth + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    if isinstance(value, list):
        if all(_is_scalar(item) for item in value):
            return json.dumps(value, ensure_ascii=False)
        items = [f"{pad}{_render(item, depth + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + closing + "]"
    return json.dumps(value, ensure_ascii=False)


def dump_canonical(value: Any) -> bytes:
    """
    JSON determinista: indentación de dos espacios, listas de escalares en una
    sola línea, fin de línea LF y UTF-8. El orden de las claves es el del dict.
    """
    return (_render(value, 0) + "\n").encode("utf-8")


def _sorted_keys(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _sorted_keys(value[k]) for k in sorted(value)}
    if isinstance(value, list):
        return [_sorted_keys(item) for item in value]
    return value


# --- Lectura ---

def read_source(path: Union[str, Path]) -> bytes:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"No existe el archivo: {path}")
    return path.read_bytes()


def _load_json(data: Source, location: str) -> Any:
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        return json.loads(text)
    except UnicodeDecodeError as e:
        raise ParseError(f"el documento no es UTF-8 válido ({e.reason})", location) from None
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON inválido: {e.msg}", f"{location}:{e.lineno}:{e.colno}") from None


def _validation_error(error: ValidationError, location: str) -> ParseError:
    first = error.errors()[0]
    path = ".".join(str(part) for part in first["loc"])
    where = f"{location}:{path}" if path else location
    return ParseError(first["msg"], where)


# --- Universos ---

def universe_from_document(document: UniverseDocument, location: str = "universe") -> ComponentUniverse:
    try:
        universe = ComponentUniverse(tuple(document.labels), name=document.name or "")
    except InputError as e:
        raise ParseError(str(e), f"{location}.labels") from None
    if document.hash is not None and document.hash != universe.fingerprint:
        raise ParseError(
            f"el hash declarado {document.hash} no coincide con {universe.fingerprint}",
            f"{location}.hash",
        )
    return universe


def parse_universe(data: Source, location: str = "<universo>") -> ComponentUniverse:
    """Documento de universo: {"name": str, "labels": [...]}; también acepta un modelo completo."""
    raw = _load_json(data, location)
    if isinstance(raw, dict) and "universe" in raw:
        raw = raw["universe"]
    try:
        document = UniverseDocument.model_validate(raw)
    except ValidationError as e:
        raise _validation_error(e, location) from None
    return universe_from_document(document, location)


# --- Modelos ---

@dataclass(frozen=True)
class ParsedModel:
    document: ModelDocument
    complex: LabelledComplex
    auto_closed: bool = False

    @property
    def name(self) -> str:
        return self.document.name


def _simplex_of(universe: ComponentUniverse, labels: Sequence[str], location: str) -> Simplex:
    if len(set(labels)) != len(labels):
        raise ParseError(f"etiquetas repetidas en {list(labels)}", location)
    try:
        return Simplex.of(universe.indices(labels))
    except InputError as e:
        raise ParseError(str(e), location) from None


def build_complex(
    document: ModelDocument, auto_close: bool = False, location: str = "<modelo>"
) -> ParsedModel:
    universe = universe_from_document(document.universe, f"{location}:universe")
    isolated = [
        _simplex_of(universe, [label], f"{location}:vertices.{i}")
        for i, label in enumerate(document.vertices or [])
    ]

    if document.mode == "flag":
        edges = [
            _simplex_of(universe, edge, f"{location}:edges.{i}")
            for i, edge in enumerate(document.edges or [])
        ]
        vertices = {v for s in isolated + edges for v in s.vertices}
        if document.max_dim == 0:
            if edges:
                raise ParseError("max_dim = 0 no admite aristas", f"{location}:max_dim")
            complex_ = LabelledComplex(universe, frozenset(isolated), 0)
        else:
            complex_ = clique_complete(
                universe, vertices, [s.vertices for s in edges], document.max_dim
            )
        return ParsedModel(document, complex_)

    listed = [
        _simplex_of(universe, simplex, f"{location}:simplices.{i}")
        for i, simplex in enumerate(document.simplices or [])
    ]
    for i, simplex in enumerate(listed):
        if simplex.dim > document.max_dim:
            raise ParseError(
                f"el símplice {list(document.simplices[i])} supera max_dim = {document.max_dim}",
                f"{location}:simplices.{i}",
            )
    given = frozenset(listed + isolated)
    closed = closure(given)
    missing = closed - given
    if missing and not auto_close:
        example = sorted(missing, key=lambda s: s.shortlex_key)[0]
        labels = [universe.label(v) for v in example.vertices]
        raise ParseError(
            f"la lista no es cerrada por caras: falta {labels} ({len(missing)} caras en total)",
            f"{location}:simplices",
        )
    if missing:
        logger.warning(f"⚠️ {document.name}: se añadieron {len(missing)} caras ausentes")
    return ParsedModel(document, LabelledComplex(universe, closed, document.max_dim), bool(missing))


def parse_model(data: Source, auto_close: bool = False, location: str = "<modelo>") -> ParsedModel:
    raw = _load_json(data, location)
    try:
        document = ModelDocument.model_validate(raw)
    except ValidationError as e:
        raise _validation_error(e, location) from None
    return build_complex(document, auto_close, location)


def load_model(path: Union[str, Path], auto_close: bool = False) -> ParsedModel:
    return parse_model(read_source(path), auto_close, str(path))


def _ordered(universe: ComponentUniverse, groups: Sequence[Sequence[str]]) -> List[List[str]]:
    indexed = [sorted(universe.indices(group)) for group in groups]
    indexed.sort(key=lambda vertices: (len(vertices), vertices))
    return [[universe.label(v) for v in vertices] for vertices in indexed]


def canonical_document(document: ModelDocument) -> dict:
    """Forma canónica como dict: claves ordenadas y etiquetas en orden Ord."""
    universe = ComponentUniverse(tuple(document.universe.labels))
    raw: dict = {
        "max_dim": document.max_dim,
        "mode": document.mode,
        "name": document.name,
        "universe": {
            key: value
            for key, value in (
                ("hash", document.universe.hash),
                ("labels", list(document.universe.labels)),
                ("name", document.universe.name),
            )
            if value is not None
        },
    }
    if document.edges is not None:
        raw["edges"] = _ordered(universe, document.edges)
    if document.simplices is not None:
        raw["simplices"] = _ordered(universe, document.simplices)
    if document.vertices is not None:
        raw["vertices"] = [label for [label] in _ordered(universe, [[v] for v in document.vertices])]
    if document.metadata is not None:
        raw["metadata"] = dict(document.metadata)
    return _sorted_keys(raw)


def serialize_model(document: ModelDocument) -> bytes:
    return dump_canonical(canonical_document(document))


def document_from_complex(
    name: str,
    complex_: LabelledComplex,
    mode: str = "explicit",
    metadata: Optional[dict] = None,
) -> ModelDocument:
    """Documento de un complejo: modo flag (aristas y vértices aislados) o explícito."""
    universe = complex_.universe
    payload: dict = {
        "name": name,
        "universe": {"labels": list(universe.labels), "name": universe.name or None},
        "mode": mode,
        "max_dim": complex_.max_dim,
        "metadata": metadata,
    }
    if mode == "flag":
        edges = [s for s in complex_.simplices if s.dim == 1]
        touched = {v for s in edges for v in s.vertices}
        payload["edges"] = [list(complex_.labels_of(s)) for s in edges]
        isolated = [universe.label(v) for v in sorted(complex_.vertices - touched)]
        if isolated:
            payload["vertices"] = isolated
    else:
        payload["simplices"] = [list(complex_.labels_of(s)) for s in complex_.sorted_simplices()]
    return ModelDocument.model_validate(payload)


# --- Declaraciones y guiones ---

def parse_declaration(data: Source, location: str = "<declaración>") -> ConceptDeclaration:
    raw = _load_json(data, location)
    try:
        document = DeclarationDocument.model_validate(raw)
    except ValidationError as e:
        raise _validation_error(e, location) from None
    try:
        return ConceptDeclaration.from_lists(document.classes, document.name or "")
    except InputError as e:
        raise ParseError(str(e), f"{location}:classes") from None


def serialize_declaration(declaration: ConceptDeclaration) -> bytes:
    classes = sorted(sorted(concept) for concept in declaration.classes)
    raw: dict = {"classes": classes}
    if declaration.name:
        raw["name"] = declaration.name
    return dump_canonical(raw)


def op_from_step(step: Any) -> EquivalenceOp:
    if isinstance(step, IdentifyAdjacentStep):
        return IdentifyAdjacent(step.u, step.v, step.target)
    if isinstance(step, IdentifyNonadjacentStep):
        if step.groups is None:
            return IdentifyNonadjacent.pair(step.u, step.v, step.target)
        return IdentifyNonadjacent(tuple((tuple(g.members), g.target) for g in step.groups))
    if isinstance(step, SplitStep):
        return Split(step.u, tuple(step.targets))
    if isinstance(step, IncludeStep):
        return Include(frozenset(frozenset(s) for s in step.simplices))
    if isinstance(step, SubstituteStep):
        return Substitute(step.u, step.target)
    raise ParseError(f"paso de guion desconocido: {step!r}")


def parse_script(data: Source, location: str = "<guion>") -> List[EquivalenceOp]:
    """Un guion es una lista ordenada de pasos con discriminador "op"."""
    raw = _load_json(data, location)
    try:
        steps = _script_adapter.validate_python(raw)
    except ValidationError as e:
        raise _validation_error(e, location) from None
    return [op_from_step(step) for step in steps]


def script_steps(script: Sequence[EquivalenceOp]) -> List[dict]:
    return [_sorted_keys(op.to_step()) for op in script]


def serialize_script(script: Sequence[EquivalenceOp]) -> bytes:
    return dump_canonical(script_steps(script))

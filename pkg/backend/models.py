from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    # Las claves desconocidas se rechazan
    model_config = ConfigDict(extra="forbid")


# --- Documentos de entrada/salida ---

class UniverseDocument(StrictModel):
    labels: List[str]
    name: Optional[str] = None
    hash: Optional[str] = None


class ModelDocument(StrictModel):
    name: str
    universe: UniverseDocument
    mode: Literal["flag", "explicit"]
    max_dim: int = Field(ge=0)
    edges: Optional[List[List[str]]] = None
    simplices: Optional[List[List[str]]] = None
    vertices: Optional[List[str]] = None
    metadata: Optional[Dict[str, str]] = None

    @model_validator(mode="after")
    def check_mode_fields(self):
        if self.mode == "flag":
            if self.simplices is not None:
                raise ValueError("el modo 'flag' usa 'edges', no 'simplices'")
            for edge in self.edges or []:
                if len(edge) != 2:
                    raise ValueError(f"cada arista debe tener 2 etiquetas: {edge}")
        else:
            if self.edges is not None:
                raise ValueError("el modo 'explicit' usa 'simplices', no 'edges'")
            for simplex in self.simplices or []:
                if not simplex:
                    raise ValueError("un símplice no puede ser vacío")
        return self


class DeclarationDocument(StrictModel):
    classes: List[List[str]]
    name: Optional[str] = None


# --- Pasos de guion de equivalencia ---

class IdentifyAdjacentStep(StrictModel):
    op: Literal["identify_adjacent"]
    u: str
    v: str
    target: str


class IdentificationGroup(StrictModel):
    members: List[str] = Field(min_length=2)
    target: str


class IdentifyNonadjacentStep(StrictModel):
    op: Literal["identify_nonadjacent"]
    u: Optional[str] = None
    v: Optional[str] = None
    target: Optional[str] = None
    groups: Optional[List[IdentificationGroup]] = None

    @model_validator(mode="after")
    def check_pair_or_groups(self):
        pair = (self.u, self.v, self.target)
        if self.groups is None and None in pair:
            raise ValueError("se requieren 'u', 'v' y 'target' o bien 'groups'")
        if self.groups is not None and any(value is not None for value in pair):
            raise ValueError("'groups' excluye 'u', 'v' y 'target'")
        return self


class SplitStep(StrictModel):
    op: Literal["split"]
    u: str
    targets: List[str] = Field(min_length=2, max_length=2)


class IncludeStep(StrictModel):
    op: Literal["include"]
    simplices: List[List[str]]


class SubstituteStep(StrictModel):
    op: Literal["substitute"]
    u: str
    target: str


ScriptStep = Annotated[
    Union[IdentifyAdjacentStep, IdentifyNonadjacentStep, SplitStep, IncludeStep, SubstituteStep],
    Field(discriminator="op"),
]


# --- Peticiones y respuestas de la API ---

class BuildResponse(BaseModel):
    success: bool
    name: str
    counts: List[int]
    valid: bool
    violations: List[str] = []
    auto_closed: bool = False


class BarcodeRequest(StrictModel):
    model: ModelDocument
    format: Literal["json", "svg", "text"] = "json"
    seed: Optional[int] = None
    max_dim: Optional[int] = Field(default=None, ge=0)


class BarcodeResponse(BaseModel):
    success: bool
    format: str
    document: Any


class DistanceRequest(StrictModel):
    first: ModelDocument
    second: ModelDocument
    mode: Literal["simplicial", "persistence"] = "simplicial"
    seed: Optional[int] = None
    max_dim: Optional[int] = Field(default=None, ge=0)


class DistanceResponse(BaseModel):
    success: bool
    mode: str
    distance: int


class VerifyRequest(StrictModel):
    source: ModelDocument
    target: ModelDocument
    script: List[ScriptStep]
    declaration: DeclarationDocument
    mode: Literal["strict", "quotient"] = "strict"


class SearchRequest(StrictModel):
    source: ModelDocument
    target: ModelDocument
    declaration: DeclarationDocument
    max_ops: int = Field(default=4, ge=0)
    mode: Literal["strict", "quotient"] = "strict"


class EquivalenceResponse(BaseModel):
    success: bool
    accepted: Optional[bool] = None
    found: Optional[bool] = None
    script: Optional[List[Dict[str, Any]]] = None
    trace: List[str] = []
    error: Optional[str] = None
    expanded: Optional[int] = None

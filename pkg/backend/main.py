# backend/main.py
import json
import logging
from datetime import datetime

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from comparison_service import ComparisonService
from config import settings
from equivalence import ConceptDeclaration
from exceptions import InputError, ModelhomError
from fixtures import fixture_bytes, fixture_names
from model_io import ParsedModel, build_complex, op_from_step
from models import (
    BarcodeRequest,
    BarcodeResponse,
    BuildResponse,
    DeclarationDocument,
    DistanceRequest,
    DistanceResponse,
    EquivalenceResponse,
    ModelDocument,
    SearchRequest,
    VerifyRequest,
)

logging.basicConfig(level=settings.MODELHOM_LOG_LEVEL, format=settings.LOG_FORMAT)
logger = logging.getLogger(__name__)

# Inicializar FastAPI
app = FastAPI(
    title=settings.API_TITLE,
    description="Distancias y equivalencias entre modelos representados como complejos simpliciales",
    version=settings.API_VERSION,
)

# CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.API_CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

comparison_service = ComparisonService()


def _http_error(error: ModelhomError) -> HTTPException:
    logger.warning(f"Petición rechazada ({error.http_status}): {error}")
    return HTTPException(status_code=error.http_status, detail=str(error))


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError):
    # Los documentos mal formados son errores de entrada
    errors = [{"loc": list(error["loc"]), "msg": error["msg"]} for error in exc.errors()]
    return JSONResponse(status_code=400, content={"detail": errors})


def _parsed(document: ModelDocument, location: str, auto_close: bool = False) -> ParsedModel:
    return build_complex(document, auto_close, location)


def _declaration(document: DeclarationDocument) -> ConceptDeclaration:
    try:
        return ConceptDeclaration.from_lists(document.classes, document.name or "")
    except InputError as e:
        raise _http_error(e)


@app.get("/health")
async def health_check():
    """Verificar estado del sistema"""
    return {
        "status": "ok",
        "version": settings.API_VERSION,
        "fixtures_available": comparison_service.fixtures_available,
        "timestamp": datetime.now().isoformat(),
    }


@app.post("/models/build", response_model=BuildResponse)
def build_model(document: ModelDocument, auto_close: bool = False):
    """Construye el complejo y devuelve los símplices por dimensión"""
    try:
        return comparison_service.build(_parsed(document, "body", auto_close))
    except ModelhomError as e:
        raise _http_error(e)


@app.post("/barcode", response_model=BarcodeResponse)
def barcode(request: BarcodeRequest):
    """Código de barras de persistencia en json, svg o texto"""
    try:
        result = comparison_service.barcode(
            _parsed(request.model, "body.model"), request.format, request.seed, request.max_dim
        )
        return {"success": True, "format": result["format"], "document": result["document"]}
    except ModelhomError as e:
        raise _http_error(e)


@app.post("/distance", response_model=DistanceResponse)
def distance(request: DistanceRequest):
    """Distancia simplicial o por persistencia entre dos modelos"""
    try:
        return comparison_service.distance(
            _parsed(request.first, "body.first"),
            _parsed(request.second, "body.second"),
            request.mode,
            request.seed,
            request.max_dim,
        )
    except ModelhomError as e:
        raise _http_error(e)


@app.post("/equivalence/verify", response_model=EquivalenceResponse)
def verify_equivalence(request: VerifyRequest):
    """Verifica un guion de operaciones admisibles entre dos modelos"""
    try:
        script = [op_from_step(step) for step in request.script]
        result = comparison_service.verify(
            _parsed(request.source, "body.source"),
            _parsed(request.target, "body.target"),
            script,
            _declaration(request.declaration),
            request.mode,
        )
        return {
            "success": True,
            "accepted": result["accepted"],
            "trace": result["trace"],
            "error": result["reason"] or None,
        }
    except ModelhomError as e:
        raise _http_error(e)


@app.post("/equivalence/search", response_model=EquivalenceResponse)
def search_equivalence(request: SearchRequest):
    """Búsqueda acotada de un guion de equivalencia"""
    try:
        result = comparison_service.search(
            _parsed(request.source, "body.source"),
            _parsed(request.target, "body.target"),
            _declaration(request.declaration),
            request.max_ops,
            request.mode,
        )
        return {
            "success": True,
            "found": result["found"],
            "script": result["script"],
            "expanded": result["expanded"],
            "error": None if result["found"] else result["message"],
        }
    except ModelhomError as e:
        raise _http_error(e)


@app.get("/fixtures/{name}")
async def get_fixture(name: str):
    """Documento canónico de un fixture incluido"""
    try:
        return json.loads(fixture_bytes(name))
    except InputError as e:
        raise HTTPException(status_code=404, detail=str(e))


# Endpoint de inicio
@app.get("/")
async def root():
    return {
        "message": settings.API_TITLE,
        "version": settings.API_VERSION,
        "endpoints": {
            "health": "/health",
            "docs": "/docs",
            "build": "/models/build",
            "barcode": "/barcode",
            "distance": "/distance",
            "verify": "/equivalence/verify",
            "search": "/equivalence/search",
            "fixtures": "/fixtures/{name}",
        },
        "fixtures": fixture_names(),
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)

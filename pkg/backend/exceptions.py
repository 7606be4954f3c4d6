# backend/exceptions.py - Jerarquía de errores del proyecto
from typing import Optional


class ModelhomError(Exception):
    """Error base de modelhom."""

    exit_code = 1
    http_status = 500


# --- Errores de entrada (uso, parseo): salida 2 / HTTP 400 ---

class InputError(ModelhomError):
    exit_code = 2
    http_status = 400


class ParseError(InputError):
    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UniverseMismatchError(InputError):
    """Los complejos no comparten el mismo universo de componentes."""

    # Una comparación entre universos distintos es una violación de dominio
    exit_code = 1
    http_status = 422


class FiltrationError(InputError):
    pass


# --- Violaciones de dominio: salida 1 / HTTP 422 ---

class DomainError(ModelhomError):
    exit_code = 1
    http_status = 422


class OperationError(DomainError):
    """Se intentó aplicar una operación no admisible."""


class NonInvertibleError(DomainError):
    """La operación no tiene inversa en el contexto dado."""


class ProvenanceError(DomainError):
    """Diagramas calculados con filtraciones distintas."""


class SearchBudgetError(DomainError):
    """La búsqueda agotó su presupuesto de estados."""

    def __init__(self, message: str, expanded: int = 0):
        self.expanded = expanded
        super().__init__(message)

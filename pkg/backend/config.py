import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

BACKEND_DIR = Path(__file__).resolve().parent


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    return int(value)


class Settings:
    # Paralelismo (joblib); None = todos los núcleos
    MODELHOM_THREADS: Optional[int] = _optional_int("MODELHOM_THREADS")

    # Logging
    MODELHOM_LOG_LEVEL: str = os.getenv("MODELHOM_LOG_LEVEL", "INFO")
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Búsqueda de equivalencias
    MODELHOM_SEARCH_BUDGET: int = int(os.getenv("MODELHOM_SEARCH_BUDGET", 200000))
    MODELHOM_INVERT_CANDIDATES: int = int(os.getenv("MODELHOM_INVERT_CANDIDATES", 4096))

    # Filtraciones
    MODELHOM_MATERIALIZE_LIMIT: int = int(os.getenv("MODELHOM_MATERIALIZE_LIMIT", 250000))

    # Fixtures
    MODELHOM_FIXTURES_DIR: Path = Path(
        os.getenv("MODELHOM_FIXTURES_DIR", str(BACKEND_DIR / "fixtures"))
    )

    # API
    API_VERSION: str = "1.0.0"
    API_TITLE: str = os.getenv("API_TITLE", "API de Comparación de Modelos")
    API_CORS_ORIGINS: list = [
        origin.strip()
        for origin in os.getenv("API_CORS_ORIGINS", "http://localhost:8501").split(",")
        if origin.strip()
    ]

    @property
    def n_jobs(self) -> int:
        """Número de trabajos para joblib (-1 = todos los núcleos)."""
        return self.MODELHOM_THREADS if self.MODELHOM_THREADS else -1


settings = Settings()

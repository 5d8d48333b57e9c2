"""
Configuración centralizada del motor
"""

import os
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# ============================================================================
# MODELO DE CONFIGURACIÓN (SCHEMA)
# ============================================================================

ENV_PREFIX = "MONOMIAL_ENGINE_"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class EngineSettings(BaseModel):
    threads: int = Field(1, ge=1, description="Hilos para enumerar cajas de exponentes")
    log_level: str = Field("WARNING", description="Nivel de logging (DEBUG, INFO, WARNING, ERROR)")
    output_format: Literal["json", "text"] = Field("json", description="Formato de salida del CLI")
    strict_checks: bool = Field(True, description="Si una falla de subaditividad se lanza como error interno")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Nivel de logging desconocido: {value}")
        return level


def _env(name: str) -> Optional[str]:
    value = os.getenv(ENV_PREFIX + name)
    if value is None or value.strip() == "":
        return None
    return value.strip()


def load_settings(**overrides) -> EngineSettings:
    """
    Carga la configuración desde variables de entorno (.env incluido).
    Ninguna variable es obligatoria; los overrides distintos de None ganan.
    """
    load_dotenv()

    values = {}
    if _env("THREADS") is not None:
        values["threads"] = _env("THREADS")
    if _env("LOG_LEVEL") is not None:
        values["log_level"] = _env("LOG_LEVEL")
    if _env("FORMAT") is not None:
        values["output_format"] = _env("FORMAT")
    if _env("STRICT") is not None:
        values["strict_checks"] = _env("STRICT").lower() in ["true", "si", "sí", "yes", "1"]

    values.update({k: v for k, v in overrides.items() if v is not None})
    return EngineSettings(**values)

"""
Excepciones del motor de ideales monomiales
"""

from typing import Any, Dict, Optional


class MonomialEngineError(Exception):
    """Excepción base del motor"""
    pass


class InputError(MonomialEngineError):
    """Documento o argumentos de entrada inválidos"""
    pass


class DimensionMismatchError(InputError):
    """Vectores o ideales con dimensiones distintas"""
    pass


class ExponentOverflowError(MonomialEngineError):
    """Un exponente excedió el ancho fijo permitido"""
    pass


class PreconditionError(MonomialEngineError):
    """Se violó la precondición de una operación"""
    pass


class MalformedSystemError(MonomialEngineError):
    """Sistema de restricciones lineales mal formado"""
    pass


class InternalInconsistencyError(MonomialEngineError):
    """
    Falló una propiedad que los teoremas garantizan.
    Si se lanza, hay un bug en la implementación, no en la entrada.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}

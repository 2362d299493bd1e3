"""
Errores de entbound.
Los fallos del solver no son excepciones: viajan como status en los resultados.
"""

from typing import Optional


class EntboundError(Exception):
    """Base de todos los errores del paquete."""


class UsageError(EntboundError, ValueError):
    """Precondición violada: índices, parámetros o entradas inválidas."""


class MatrixFormatError(UsageError):
    """Archivo de matriz mal formado; indica la línea (1-based) cuando se conoce."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"línea {line}: {message}"
        super().__init__(message)


class CapacityError(EntboundError):
    """El problema excede la dimensión configurada."""

    def __init__(self, required: int, cap: int, what: str = "problema SDP"):
        self.required = required
        self.cap = cap
        super().__init__(
            f"{what} requiere dimensión {required}, supera el límite configurado {cap}"
        )


class SdpModelError(UsageError):
    """Modelo SDP mal construido (bloques incompatibles, coeficientes no hermíticos)."""


__all__ = [
    "EntboundError",
    "UsageError",
    "MatrixFormatError",
    "CapacityError",
    "SdpModelError",
]

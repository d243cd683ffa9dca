"""Jerarquía de errores del motor de ecuaciones de borde."""
from __future__ import annotations

from typing import Optional


class BoundaryError(ValueError):
    """Error base del dominio; los nombres de subclase se usan como nombre de regla."""

    rule: str = "BoundaryError"

    def __init__(self, message: str, subject: Optional[str] = None) -> None:
        super().__init__(message)
        self.subject = subject

    def __init_subclass__(cls, **kwargs) -> None:
        super().__init_subclass__(**kwargs)
        cls.rule = cls.__name__


class EnhancementMismatch(BoundaryError):
    pass


class Unstable(BoundaryError):
    pass


class DegreeMismatch(BoundaryError):
    pass


class LevelGap(BoundaryError):
    pass


class LevelOutOfRange(BoundaryError):
    pass


class Disconnected(BoundaryError):
    pass


class MissingBoundaryCoordinates(BoundaryError):
    pass


class NotInVerticalFiltration(BoundaryError):
    pass


class NotInLevelFiltration(BoundaryError):
    pass


class UnknownGenerator(BoundaryError):
    pass


class InvalidMonodromyType(BoundaryError):
    pass


class DimensionMismatch(BoundaryError):
    pass


class NotNilpotent(BoundaryError):
    pass


class ParseError(BoundaryError):
    """Fallo de lectura de un fixture; `path` apunta al primer campo inválido."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"{path}: {reason}", subject=path)
        self.path = path
        self.reason = reason


class ConfigurationError(BoundaryError):
    """Configuración de comando inutilizable, p. ej. una sección de reporte desconocida."""

"""Exception hierarchy shared by every archlayers module."""

from __future__ import annotations


class ArchLayersError(Exception):
    """Base class for all library errors."""


class DuplicateNodeError(ArchLayersError):
    pass


class UnknownNodeError(ArchLayersError):
    pass


class SelfDependencyError(ArchLayersError):
    pass


class ParseError(ArchLayersError):
    """Malformed input text. ``line`` is 1-based (a row number for CSV input)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ArchLayersError):
    pass


class IncompleteAssignmentError(ArchLayersError):
    pass


class ConfigError(ArchLayersError):
    pass


class NumericalError(ArchLayersError):
    pass


class TrainError(ArchLayersError):
    pass


class ModelFormatError(ArchLayersError):
    pass


class DomainMismatchError(ArchLayersError):
    pass


class EmptyMatrixError(ArchLayersError):
    pass


class SpecError(ArchLayersError):
    pass

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from hiermet.model import SourceStatus
    from hiermet.schema import Violation


class HiermetError(Exception):
    """Base class for pipeline errors."""


class HorizonError(HiermetError, ValueError):
    pass


class ContextValidationError(HiermetError, ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        lines = "; ".join(f"{v.path}: {v.message}" for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} context violation(s): {lines}")


class SourceError(HiermetError):
    """An external source failed; carries the final status."""

    def __init__(self, message: str, status: SourceStatus, statuses: Sequence[SourceStatus] = ()):
        super().__init__(message)
        self.status = status
        self.statuses = list(statuses) or [status]


class NormalizationError(HiermetError, ValueError):
    def __init__(self, index: int, field: str, reason: str):
        self.index = index
        self.field = field
        super().__init__(f"record {index}: field {field!r}: {reason}")


class GridError(HiermetError, ValueError):
    pass


class ProviderError(HiermetError):
    """An agent provider could not be reached or timed out."""

    def __init__(self, message: str, status: SourceStatus):
        super().__init__(message)
        self.status = status


class AnalysisSchemaError(HiermetError):
    """Provider output still violated the analysis schema after repairs."""

    def __init__(self, message: str, raw_output: str, violations: Sequence[Violation] = ()):
        super().__init__(message)
        self.raw_output = raw_output
        self.violations = list(violations)


class ConfigError(HiermetError, ValueError):
    def __init__(self, messages: Sequence[str]):
        self.messages = list(messages)
        super().__init__("invalid configuration: " + "; ".join(self.messages))

"""Exception hierarchy shared by the audit pipeline."""

from __future__ import annotations


class AuditError(Exception):
    """Base class for every domain error raised by auditgap."""

    code = "AuditError"


class UnknownScaleValue(AuditError, ValueError):
    """A probability or severity value matches no label, alias or integer."""

    code = "UnknownScaleValue"


class UnknownRootCause(AuditError, ValueError):
    """A root-cause label is not one of the four codebook categories."""

    code = "UnknownRootCause"


class MalformedFile(AuditError):
    """Input bytes are unreadable or the header row is missing/incomplete."""

    code = "MalformedFile"


class DuplicateItemId(AuditError):
    code = "DuplicateItemId"


class EmptyDataset(AuditError):
    """A metric was requested over zero Active concerns."""

    code = "EmptyDataset"


class ZeroTotalRisk(AuditError):
    code = "ZeroTotalRisk"


class InsufficientData(AuditError):
    """No item in a coder table has two or more codes to pair."""

    code = "InsufficientData"


class InvalidThreshold(AuditError, ValueError):
    code = "InvalidThreshold"


class UnsupportedFormat(AuditError, ValueError):
    code = "UnsupportedFormat"

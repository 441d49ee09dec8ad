"""Error taxonomy shared across the toolkit.

Every data-level failure raises a ToolkitError subclass so the CLI can map
them to a single machine-readable error line and exit code 1. Programming
errors (bad arguments to library functions) raise plain ValueError/TypeError.
"""
from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all recoverable toolkit errors."""


class RecordParseError(ToolkitError):
    """A line of an input file failed to parse or validate."""

    def __init__(self, message: str, line_no: int | None = None, path: str | None = None):
        self.line_no = line_no
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"line {line_no}: "
        super().__init__(where + message)


class DuplicateLanguage(ToolkitError):
    """Registry file declared the same language code twice."""


class MissingCenter(ToolkitError):
    """Registry lacks en or zh; the direction space is undefined without both."""


class UnknownLanguage(ToolkitError):
    """A language code that is not present in the active registry."""

    def __init__(self, code: str):
        self.code = code
        super().__init__(f"unknown language code: {code!r}")


class DuplicateRecordId(ToolkitError):
    """Two records in one corpus share an id."""


class MissingScore(ToolkitError):
    """A pair id has no entry in the score sidecar."""

    def __init__(self, pair_id: str):
        self.pair_id = pair_id
        super().__init__(f"no score for id {pair_id!r}")


class InvalidScore(ToolkitError):
    """A quality score fell outside [0, 1]."""


class DuplicateRecord(ToolkitError):
    """Two evaluation records cover the same (model, direction, metric)."""


class NoAuxiliaryDefined(ToolkitError):
    """PMP was requested for a direction that has no auxiliary language."""


class EmptySource(ToolkitError):
    """A prompt render was asked to work with an empty source text."""


class BackendError(ToolkitError):
    """An external subprocess backend misbehaved or failed too often."""

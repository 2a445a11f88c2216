"""Exception hierarchy shared by all graphdyn subsystems."""

from __future__ import annotations


class GraphDynError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(GraphDynError):
    """A graph or update file (or an update record) failed validation.

    Carries the offending location when one is known.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif path is not None:
            where += " "
        super().__init__(f"{where}{message}")


class ContractViolation(GraphDynError):
    """A caller broke an API precondition (out-of-range node id, bad batch kind, ...)."""


class ConfigurationError(GraphDynError):
    """A feature was used without being enabled at construction time."""


class CompileError(GraphDynError):
    """Source program is invalid; carries the collected diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "\n".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} diagnostic(s):\n{lines}")


class ExecError(GraphDynError):
    """Runtime failure while executing a program; carries the DSL source span."""

    def __init__(self, message: str, span=None):
        self.span = span
        if span is not None:
            message = f"{message} (at line {span[0]}, column {span[1]})"
        super().__init__(message)


class DivergenceError(ExecError):
    """A fixed-point loop exceeded its iteration cap."""


class CodegenError(GraphDynError):
    """The program uses a construct the requested backend cannot lower."""

from .analysis import AccessSummary, analyze_access
from .ast import Program, ast_equal, walk
from .diagnostics import Diagnostic, Span
from .parser import parse, parse_source
from .pretty import pretty_print
from .tokens import Token, tokenize
from .transform import strip_dead_code
from .typecheck import CheckResult, typecheck

from ..errors import CompileError


def compile_source(source: str, strip: bool = False) -> CheckResult:
    """Full frontend pipeline; raises CompileError on any diagnostic."""
    program, diags = parse_source(source)
    if any(d.severity == "error" for d in diags):
        raise CompileError(diags)
    result = typecheck(program)
    if not result.ok:
        raise CompileError(diags + result.diagnostics)
    if strip:
        # stripping rebuilds nodes, so annotations are re-established by a
        # second checking pass
        program = strip_dead_code(result.program)
        result = typecheck(program)
        if not result.ok:
            raise CompileError(result.diagnostics)
    return result


__all__ = [
    "AccessSummary",
    "analyze_access",
    "Program",
    "ast_equal",
    "walk",
    "Diagnostic",
    "Span",
    "parse",
    "parse_source",
    "pretty_print",
    "Token",
    "tokenize",
    "strip_dead_code",
    "typecheck",
    "CheckResult",
    "compile_source",
]

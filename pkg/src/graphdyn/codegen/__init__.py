from .openmp import EmitPlan, SUPPORT_HEADER, build_emit_plan, emit_openmp, support_header_text
from .smoke import SmokeReport, compile_emitted, find_toolchain, run_emitted

__all__ = [
    "EmitPlan",
    "SUPPORT_HEADER",
    "build_emit_plan",
    "emit_openmp",
    "support_header_text",
    "SmokeReport",
    "compile_emitted",
    "find_toolchain",
    "run_emitted",
]

from .interp import Engine, ExecContext, LocalGraphView
from .properties import INT_INF, EdgePropertyTable, NodePropertyTable, ScalarCell
from .run import compile_and_run, needs_reverse, run_batches, run_program

__all__ = [
    "Engine",
    "ExecContext",
    "LocalGraphView",
    "INT_INF",
    "EdgePropertyTable",
    "NodePropertyTable",
    "ScalarCell",
    "run_program",
    "run_batches",
    "compile_and_run",
    "needs_reverse",
]

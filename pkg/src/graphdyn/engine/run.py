"""Front door for program execution: input binding and driver orchestration."""

from __future__ import annotations

from typing import Dict, Optional

from ..frontend import ast, compile_source
from ..frontend.typecheck import CheckResult
from ..graph.dynamic import DynamicGraph
from ..graph.updates import UpdateStream
from .interp import Engine, ExecContext, LocalGraphView


def needs_reverse(program: ast.Program) -> bool:
    """Reverse adjacency is paid for only when a construct consumes it."""
    for node in ast.walk(program):
        if isinstance(node, ast.MethodCall) and node.name in ("nodesTo", "propagateNodeFlags"):
            return True
    return False


def run_program(
    check: CheckResult,
    graph: DynamicGraph,
    inputs: Dict[str, object],
    *,
    entry: Optional[str] = None,
    worker_count: int = 1,
    iteration_cap_factor: int = 10,
    debug: bool = False,
    gview=None,
) -> ExecContext:
    """Execute a checked program's entry function over the graph."""
    engine = Engine(
        check,
        worker_count=worker_count,
        iteration_cap_factor=iteration_cap_factor,
        debug=debug,
    )
    view = gview if gview is not None else LocalGraphView(graph)
    return engine.run(view, inputs, entry=entry)


def run_batches(
    check: CheckResult,
    graph: DynamicGraph,
    updates: UpdateStream,
    batch_size: int,
    inputs: Dict[str, object],
    **kwargs,
) -> ExecContext:
    """Run the Dynamic driver over an update stream in fixed-size batches.

    The driver's own AST sequences the per-batch work (OnDelete handlers,
    updateCSRDel, Decremental, OnAdd handlers, updateCSRAdd, Incremental or
    whatever order the program specifies); this only binds the stream and
    batch size to the driver's parameters.
    """
    entry_fn = check.program.function(check.program.entry or "")
    if entry_fn is None:
        raise ValueError("program has no Dynamic driver function")
    bound = dict(inputs)
    for p, ptype in zip(entry_fn.params, entry_fn._param_types):
        if ptype.name == "updates":
            bound[p.name] = updates
        elif p.name in ("batchsize", "batch_size"):
            bound[p.name] = batch_size
    return run_program(check, graph, bound, **kwargs)


def compile_and_run(
    source: str,
    graph: DynamicGraph,
    inputs: Dict[str, object],
    **kwargs,
) -> ExecContext:
    return run_program(compile_source(source), graph, inputs, **kwargs)

"""Parallel tree-walking executor.

Each function body is compiled once into a tree of Python closures; a frame
(dict keyed by Symbol objects) carries the live bindings.  Outer-level
forall/OnAdd/OnDelete loops distribute contiguous chunks over a worker
pool; scalar reductions use per-worker partials combined in worker order,
multi-assign Min/Max takes a guard lock, and plain flag stores are
idempotent, so final results do not depend on the schedule.
"""

from __future__ import annotations

import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from ..errors import ConfigurationError, DivergenceError, ExecError
from ..frontend import analysis as anl
from ..frontend import ast
from ..frontend.typecheck import CheckResult
from ..graph.dynamic import DynamicGraph, EdgeRef
from ..graph.updates import UpdateBatch, UpdateStream
from .properties import (
    INT_INF,
    EdgePropertyTable,
    NodePropertyTable,
    ScalarCell,
)


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class LocalGraphView:
    """Engine-facing adapter over a DynamicGraph (single address space)."""

    def __init__(self, graph: DynamicGraph):
        self.graph = graph
        self.node_count = graph.node_count

    def neighbors(self, v: int, frame) -> List[EdgeRef]:
        return self.graph.neighbors(v)

    def nodes_to(self, v: int, frame) -> List[EdgeRef]:
        return self.graph.nodes_to(v)

    def apply_deletes(self, batch: UpdateBatch, frame) -> None:
        self.graph.update_csr_del(batch)

    def apply_adds(self, batch: UpdateBatch, frame) -> None:
        self.graph.update_csr_add(batch)

    def merge_due(self, batch_index: int) -> bool:
        return (batch_index + 1) % self.graph.merge_interval == 0

    def merge(self) -> None:
        self.graph.merge_deltas()

    def owner_of(self, v: int) -> int:
        return 0

    def make_edge_table(self, name: str, dtype: str) -> EdgePropertyTable:
        return EdgePropertyTable(name, dtype, self.graph)

    def propagate_flags(self, table: NodePropertyTable) -> int:
        """Level-synchronous BFS flooding of true flags across weak components.

        Reads coordinate slices directly instead of materializing edge refs;
        the flood is the hot path of dynamic PageRank.
        """
        import numpy as np

        from ..graph.csr import SENTINEL

        g = self.graph
        if g.directed and not g.has_reverse:
            raise ConfigurationError(
                "propagateNodeFlags on a directed graph needs reverse adjacency"
            )
        data = table.data
        frontier = np.flatnonzero(data).tolist()
        segments = g.segments()
        rounds = 0
        while frontier:
            rounds += 1
            nxt = []
            for v in frontier:
                for seg in segments:
                    lo, hi = seg.slot_range(v)
                    if lo == hi:
                        continue
                    targets = seg.coordinates[lo:hi]
                    targets = targets[targets != SENTINEL]
                    fresh = targets[~data[targets]]
                    if fresh.size:
                        data[fresh] = True
                        nxt.extend(fresh.tolist())
                if g.directed:
                    for src, _, _ in g._reverse[v]:
                        if not data[src]:
                            data[src] = True
                            nxt.append(src)
            frontier = nxt
        return rounds


@dataclass
class ExecContext:
    """Execution state plus everything a run reports back."""

    gview: object
    worker_count: int = 1
    deterministic_mode: bool = True
    iteration_cap_factor: int = 10
    debug: bool = False
    current_batch: Optional[UpdateBatch] = None
    properties: Dict[str, object] = field(default_factory=dict)
    scalars: Dict[str, object] = field(default_factory=dict)
    return_value: object = None
    fixedpoint_iterations: List[int] = field(default_factory=list)
    batch_stats: List[dict] = field(default_factory=list)
    phase_totals: Dict[str, float] = field(default_factory=dict)
    contention: Dict[int, set] = field(default_factory=dict)
    flagged_by_loop: Dict[int, set] = field(default_factory=dict)
    parallel_active: bool = False
    atomic_lock: threading.Lock = field(default_factory=threading.Lock)
    pool: Optional[ThreadPoolExecutor] = None

    @property
    def graph(self) -> DynamicGraph:
        return self.gview.graph

    def iteration_cap(self) -> int:
        return max(1, self.iteration_cap_factor * max(1, self.gview.node_count))

    def add_phase(self, phase: str, seconds: float) -> None:
        self.phase_totals[phase] = self.phase_totals.get(phase, 0.0) + seconds
        if self.batch_stats:
            stats = self.batch_stats[-1]
            stats[phase] = stats.get(phase, 0.0) + seconds

    def ensure_pool(self) -> ThreadPoolExecutor:
        if self.pool is None:
            self.pool = ThreadPoolExecutor(max_workers=self.worker_count)
        return self.pool

    def contention_report(self) -> Dict[int, dict]:
        """loop id -> {contended, flagged}; populated only in debug mode."""
        return {
            loop_id: {
                "contended": sorted(locs),
                "flagged": sorted(self.flagged_by_loop.get(loop_id, set())),
            }
            for loop_id, locs in self.contention.items()
        }


_EDGE_FIELD_GETTERS = {
    "source": lambda e: e.source,
    "destination": lambda e: e.target,
    "weight": lambda e: e.weight,
}

_SCALAR_CONV = {
    "int": lambda v: INT_INF if v == math.inf else int(v),
    "long": lambda v: INT_INF if v == math.inf else int(v),
    "node": lambda v: int(v),
    "float": float,
    "double": float,
    "bool": bool,
}

_OBJECT_TYPES = ("propNode", "propEdge", "Graph", "updates")


def _sat_add(a, b):
    if a >= INT_INF or b >= INT_INF:
        return INT_INF
    return a + b


def _sat_sub(a, b):
    if a >= INT_INF or b >= INT_INF:
        return INT_INF
    return a - b


def _int_div(a, b):
    q = a // b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q += 1  # truncate toward zero
    return q


class Engine:
    """Compiles a checked program and executes it over a graph view."""

    def __init__(
        self,
        check: CheckResult,
        *,
        worker_count: int = 1,
        iteration_cap_factor: int = 10,
        debug: bool = False,
    ):
        self.check = check
        self.program = check.program
        self.summary = anl.analyze_access(self.program)
        self.worker_count = max(1, worker_count)
        self.iteration_cap_factor = iteration_cap_factor
        self.debug = debug
        self._compiled: Dict[str, Callable] = {}
        self.ctx: Optional[ExecContext] = None
        self.partitioned = False
        # analysis classification per write statement, for lock decisions
        self._write_kinds: Dict[int, str] = {}
        for loop in self.summary.loops:
            for site in loop.writes:
                self._write_kinds[id(site.stmt)] = site.kind

    # -- public entry ---------------------------------------------------------

    def run(
        self,
        gview,
        inputs: Dict[str, object],
        entry: Optional[str] = None,
    ) -> ExecContext:
        entry_name = entry or self.program.entry
        if entry_name is None:
            raise ExecError("program has no Dynamic driver and no entry was named")
        fn = self.program.function(entry_name)
        if fn is None:
            raise ExecError(f"no function named {entry_name!r}")
        self.partitioned = getattr(gview, "is_partitioned", False)
        ctx = ExecContext(
            gview,
            worker_count=self.worker_count,
            iteration_cap_factor=self.iteration_cap_factor,
            debug=self.debug,
        )
        self.ctx = ctx
        self._compiled.clear()
        frame: dict = {}
        args = []
        for p, ptype in zip(fn.params, fn._param_types):
            tname = ptype.name
            if tname == "Graph":
                args.append(gview)
            elif tname == "updates":
                value = inputs.get(p.name)
                if value is None:
                    raise ExecError(f"unbound input {p.name!r} (update stream)")
                args.append(value)
            elif tname == "propNode":
                table = NodePropertyTable(p.name, ptype.arg.name, gview.node_count)
                ctx.properties[p.name] = table
                args.append(table)
            elif tname == "propEdge":
                table = gview.make_edge_table(p.name, ptype.arg.name)
                ctx.properties[p.name] = table
                args.append(table)
            else:
                if p.name not in inputs:
                    raise ExecError(f"unbound input {p.name!r}")
                args.append(_SCALAR_CONV[tname](inputs[p.name]))
        try:
            ctx.return_value = self._call_function(fn, args, frame_out=frame)
        finally:
            if ctx.pool is not None:
                ctx.pool.shutdown(wait=True)
                ctx.pool = None
        for sym, slot in frame.items():
            if isinstance(sym, str):
                continue
            if isinstance(slot, ScalarCell):
                ctx.scalars[sym.name] = slot.value
            elif isinstance(slot, (NodePropertyTable, EdgePropertyTable)):
                ctx.properties.setdefault(sym.name, slot)
        if self.debug:
            self._check_contention(ctx)
        return ctx

    def _check_contention(self, ctx: ExecContext) -> None:
        for loop_id, contended in ctx.contention.items():
            flagged = ctx.flagged_by_loop.get(loop_id, set())
            leaked = contended - flagged
            if leaked:
                raise AssertionError(
                    f"engine bug: unflagged contended writes {sorted(leaked)} in loop {loop_id}"
                )

    # -- function compilation -----------------------------------------------------

    def _get_compiled(self, fn: ast.FunctionDecl) -> Callable:
        cached = self._compiled.get(fn.name)
        if cached is None:
            cached = self._compile_function(fn)
            self._compiled[fn.name] = cached
        return cached

    def _call_function(self, fn: ast.FunctionDecl, args: list, frame_out=None):
        return self._get_compiled(fn)(args, frame_out)

    def _compile_function(self, fn: ast.FunctionDecl) -> Callable:
        body = self._compile_block(fn.body)
        syms = self._param_symbols(fn)
        param_types = fn._param_types

        def call(args: list, frame_out=None):
            frame: dict = {}
            for sym, ptype, value in zip(syms, param_types, args):
                if ptype.name in _OBJECT_TYPES:
                    frame[sym] = value
                else:
                    frame[sym] = ScalarCell(value)
            if frame_out is not None:
                frame_out.update(frame)
                frame = frame_out
            try:
                body(frame)
            except _Return as r:
                return r.value
            return None

        return call

    def _param_symbols(self, fn: ast.FunctionDecl):
        by_span = {}
        for sym in self.check.symbols.all_bindings:
            if sym.is_param:
                by_span[(sym.decl_span, sym.name)] = sym
        out = []
        for p in fn.params:
            sym = by_span.get((p.type.span, p.name)) or by_span.get(((p.span), p.name))
            if sym is None:
                raise ExecError(f"internal: no symbol for parameter {p.name!r}", p.span)
            out.append(sym)
        return out

    # -- statements -----------------------------------------------------------------

    def _compile_block(self, block: ast.BlockStmt) -> Callable:
        stmts = [self._compile_stmt(s) for s in block.statements]

        def run(frame):
            for s in stmts:
                s(frame)

        return run

    def _compile_stmt(self, stmt: ast.Stmt) -> Callable:
        name = type(stmt).__name__
        return getattr(self, f"_c_{name}")(stmt)

    def _c_BlockStmt(self, stmt: ast.BlockStmt) -> Callable:
        return self._compile_block(stmt)

    def _c_Declaration(self, stmt: ast.Declaration) -> Callable:
        sym = self._decl_symbol(stmt)
        tname = sym.type.name
        if tname == "propNode":
            dtype = sym.type.arg.name
            node_count = None  # taken from the live view at run time

            def run(frame, sym=sym, dtype=dtype, pname=stmt.name):
                frame[sym] = NodePropertyTable(pname, dtype, self.ctx.gview.node_count)

            return run
        if tname == "propEdge":
            dtype = sym.type.arg.name

            def run(frame, sym=sym, dtype=dtype, pname=stmt.name):
                frame[sym] = self.ctx.gview.make_edge_table(pname, dtype)

            return run
        conv = _SCALAR_CONV.get(tname)
        if stmt.init is not None:
            init = self._compile_expr(stmt.init)

            def run(frame, sym=sym, conv=conv, init=init):
                frame[sym] = ScalarCell(conv(init(frame)))

            return run
        default = False if tname == "bool" else (0.0 if tname in ("float", "double") else 0)

        def run(frame, sym=sym, default=default):
            frame[sym] = ScalarCell(default)

        return run

    def _decl_symbol(self, stmt: ast.Declaration):
        for sym in self.check.symbols.all_bindings:
            if sym.decl_span == stmt.span and sym.name == stmt.name:
                return sym
        raise ExecError(f"internal: no symbol for declaration {stmt.name!r}", stmt.span)

    def _c_Assignment(self, stmt: ast.Assignment) -> Callable:
        writer = self._compile_writer(stmt.target)
        value = self._compile_expr(stmt.value)
        phase = self._call_phase(stmt.value)

        if phase is not None:
            def run(frame):
                start = time.perf_counter()
                result = value(frame)
                self.ctx.add_phase(phase, time.perf_counter() - start)
                writer(frame, result)
            return run

        def run(frame):
            writer(frame, value(frame))

        return run

    def _c_ReduceAssign(self, stmt: ast.ReduceAssign) -> Callable:
        reader = self._compile_expr(stmt.target)
        writer = self._compile_writer(stmt.target)
        if stmt.op == "++":
            value = lambda frame: 1
        else:
            value = self._compile_expr(stmt.value)
        is_float = getattr(stmt.target, "_type", None) is not None and stmt.target._type.name in (
            "float",
            "double",
        )
        if stmt.op == "-=" and not is_float:
            op = _sat_sub
        elif stmt.op == "-=":
            op = lambda a, b: a - b
        elif is_float:
            op = lambda a, b: a + b
        else:
            op = _sat_add
        # reductions into shared property cells are fetch-op: they take the
        # guard lock when workers race (scalar reductions use per-worker
        # partials instead and stay lock-free)
        locked = (
            self._write_kinds.get(id(stmt)) == anl.REDUCTION
            and not isinstance(stmt.target, ast.Identifier)
        )
        if locked:
            def run(frame):
                ctx = self.ctx
                if ctx.parallel_active:
                    with ctx.atomic_lock:
                        writer(frame, op(reader(frame), value(frame)))
                else:
                    writer(frame, op(reader(frame), value(frame)))
            return run

        def run(frame):
            writer(frame, op(reader(frame), value(frame)))

        return run

    def _c_If(self, stmt: ast.If) -> Callable:
        cond = self._compile_expr(stmt.cond)
        then = self._compile_stmt(stmt.then)
        els = self._compile_stmt(stmt.els) if stmt.els is not None else None

        if els is None:
            def run(frame):
                if cond(frame):
                    then(frame)
        else:
            def run(frame):
                if cond(frame):
                    then(frame)
                else:
                    els(frame)
        return run

    def _c_While(self, stmt: ast.While) -> Callable:
        cond = self._compile_expr(stmt.cond)
        body = self._compile_stmt(stmt.body)

        def run(frame):
            while cond(frame):
                body(frame)

        return run

    def _c_Return(self, stmt: ast.Return) -> Callable:
        if stmt.value is None:
            def run(frame):
                raise _Return(None)
            return run
        value = self._compile_expr(stmt.value)

        def run(frame):
            raise _Return(value(frame))

        return run

    def _c_ExprStmt(self, stmt: ast.ExprStmt) -> Callable:
        expr = stmt.expr
        builtin = getattr(expr, "_builtin", None)
        if builtin in ("attachNodeProperty", "attachEdgeProperty"):
            pairs = [(sym, self._compile_expr(v)) for sym, v in expr._attach]

            def run(frame):
                for sym, value in pairs:
                    table = frame[sym]
                    table.fill(value(frame))

            return run
        if builtin in ("updateCSRAdd", "updateCSRDel"):
            arg = self._compile_expr(expr.args[0])
            deletes = builtin == "updateCSRDel"

            def run(frame):
                batch = arg(frame)
                if isinstance(batch, UpdateStream):
                    batch = batch.as_batch()
                self._validate_batch(batch)
                start = time.perf_counter()
                if deletes:
                    self.ctx.gview.apply_deletes(batch.only_deletes(), frame)
                else:
                    self.ctx.gview.apply_adds(batch.only_adds(), frame)
                self.ctx.add_phase("structural_update", time.perf_counter() - start)

            return run
        if builtin == "propagateNodeFlags":
            table_ref = self._compile_expr(expr.args[0])

            def run(frame):
                start = time.perf_counter()
                self.ctx.gview.propagate_flags(table_ref(frame))
                self.ctx.add_phase("propagate", time.perf_counter() - start)

            return run
        # plain call for side effects
        compiled = self._compile_expr(expr)
        phase = self._call_phase(expr)
        if phase is None:
            def run(frame):
                compiled(frame)
            return run

        def run(frame):
            start = time.perf_counter()
            compiled(frame)
            self.ctx.add_phase(phase, time.perf_counter() - start)

        return run

    def _call_phase(self, expr: ast.Expr) -> Optional[str]:
        if isinstance(expr, ast.CallExpr):
            target = getattr(expr, "_target", None)
            if target is not None and target.role in ("Incremental", "Decremental"):
                return "propagate"
            if target is not None and target.role == "Static":
                return "static_phase"
        return None

    def _validate_batch(self, batch: UpdateBatch) -> None:
        n = self.ctx.gview.node_count
        for rec in batch:
            if not (0 <= rec.src < n and 0 <= rec.dst < n):
                raise ExecError(
                    f"update record {rec.kind} {rec.src} {rec.dst} references a node"
                    f" outside [0, {n})"
                )

    def _c_MinAssign(self, stmt: ast.MinAssign) -> Callable:
        return self._compile_min_max(stmt, is_min=True)

    def _c_MaxAssign(self, stmt: ast.MaxAssign) -> Callable:
        return self._compile_min_max(stmt, is_min=False)

    def _compile_min_max(self, stmt, is_min: bool) -> Callable:
        guard_read = self._compile_expr(stmt.targets[0])
        writers = [self._compile_writer(t) for t in stmt.targets]
        values = [self._compile_expr(v) for v in stmt.values]
        better = (lambda cand, cur: cand < cur) if is_min else (lambda cand, cur: cand > cur)

        def run(frame):
            vals = [v(frame) for v in values]
            cand = vals[0]
            if not better(cand, guard_read(frame)):
                return
            ctx = self.ctx
            if ctx.parallel_active:
                with ctx.atomic_lock:
                    if not better(cand, guard_read(frame)):
                        return
                    for w, val in zip(writers, vals):
                        w(frame, val)
            else:
                for w, val in zip(writers, vals):
                    w(frame, val)

        return run

    # -- loops ------------------------------------------------------------------------

    def _c_ForAll(self, stmt: ast.ForAll) -> Callable:
        domain = self._compile_domain(stmt.source)
        var_sym = self._loop_symbol(stmt)
        pred = self._compile_expr(stmt.filter) if stmt.filter is not None else None
        body = self._compile_block(stmt.body)
        parallel = getattr(stmt, "_parallel_effective", False)
        return self._compile_loop(stmt, domain, var_sym, pred, body, parallel, phase=None)

    def _c_OnAdd(self, stmt: ast.OnAdd) -> Callable:
        return self._compile_on_update(stmt, adds=True)

    def _c_OnDelete(self, stmt: ast.OnDelete) -> Callable:
        return self._compile_on_update(stmt, adds=False)

    def _compile_on_update(self, stmt, adds: bool) -> Callable:
        source = self._compile_expr(stmt.source)
        var_sym = self._loop_symbol(stmt)
        body = self._compile_block(stmt.body)
        parallel = getattr(stmt, "_parallel_effective", False)

        def domain(frame):
            batch = source(frame)
            if isinstance(batch, UpdateStream):
                batch = batch.as_batch()
            records = batch.adds if adds else batch.deletes
            return [EdgeRef(r.src, r.dst, r.weight, -1, -1) for r in records]

        return self._compile_loop(stmt, domain, var_sym, None, body, parallel, phase="preprocess")

    def _loop_symbol(self, stmt):
        # the loop variable was declared by the checker with the loop's span
        for sym in self.check.symbols.all_bindings:
            if sym.decl_span == stmt.span and sym.name == stmt.var:
                return sym
        raise ExecError(f"internal: no symbol for loop variable {stmt.var!r}", stmt.span)

    def _compile_loop(self, stmt, domain, var_sym, pred, body, parallel, phase) -> Callable:
        loop_id = id(stmt)
        loop_summary = self.summary.for_loop(stmt)
        reductions, guards = self._worker_merge_plan(loop_summary)

        home_needed = self.partitioned

        def run_sequential(frame):
            ctx = self.ctx
            cell = ScalarCell(None)
            frame[var_sym] = cell
            items = domain(frame)
            if pred is None:
                for elem in items:
                    cell.value = elem
                    if home_needed:
                        frame["_home"] = _elem_home(ctx.gview, elem)
                    body(frame)
            else:
                for elem in items:
                    cell.value = elem
                    frame["_elem"] = elem
                    if not pred(frame):
                        continue
                    if home_needed:
                        frame["_home"] = _elem_home(ctx.gview, elem)
                    body(frame)
            if home_needed:
                frame.pop("_home", None)

        def run_parallel(frame):
            ctx = self.ctx
            items = list(domain(frame))
            workers = min(ctx.worker_count, max(1, len(items)))
            if workers <= 1 or len(items) <= 1:
                run_sequential(frame)
                return
            chunks = _chunk(items, workers)
            worker_frames = []
            for w in range(len(chunks)):
                wf = dict(frame)
                wf[var_sym] = ScalarCell(None)
                for sym in reductions:
                    wf[sym] = ScalarCell(0)
                for sym, _ in guards:
                    wf[sym] = ScalarCell(frame[sym].value)
                worker_frames.append(wf)

            def work(wf, chunk):
                cell = wf[var_sym]
                if pred is None:
                    for elem in chunk:
                        cell.value = elem
                        if home_needed:
                            wf["_home"] = _elem_home(ctx.gview, elem)
                        body(wf)
                else:
                    for elem in chunk:
                        cell.value = elem
                        wf["_elem"] = elem
                        if not pred(wf):
                            continue
                        if home_needed:
                            wf["_home"] = _elem_home(ctx.gview, elem)
                        body(wf)

            pool = ctx.ensure_pool()
            ctx.parallel_active = True
            try:
                futures = [pool.submit(work, wf, chunk) for wf, chunk in zip(worker_frames, chunks)]
                for fut in futures:
                    fut.result()
            finally:
                ctx.parallel_active = False
            # combine in worker order: deterministic for a fixed worker count
            for sym in reductions:
                total = frame[sym].value
                for wf in worker_frames:
                    total = total + wf[sym].value
                frame[sym].value = total
            for sym, is_min in guards:
                best = frame[sym].value
                for wf in worker_frames:
                    v = wf[sym].value
                    best = min(best, v) if is_min else max(best, v)
                frame[sym].value = best

        if self.debug and loop_summary is not None:

            def run_debug(frame):
                ctx = self.ctx
                ctx.flagged_by_loop[loop_id] = loop_summary.flagged
                log = []
                frame["_wlog"] = (loop_id, log)
                cell = ScalarCell(None)
                frame[var_sym] = cell
                for i, elem in enumerate(domain(frame)):
                    cell.value = elem
                    if pred is not None:
                        frame["_elem"] = elem
                        if not pred(frame):
                            continue
                    frame["_iter"] = i
                    body(frame)
                frame.pop("_wlog", None)
                seen: Dict[tuple, int] = {}
                contended = ctx.contention.setdefault(loop_id, set())
                for loc, key, it in log:
                    prior = seen.get(key)
                    if prior is not None and prior != it:
                        contended.add(loc)
                    else:
                        seen[key] = it

            inner = run_debug
        elif parallel and self.worker_count > 1:
            inner = run_parallel
        else:
            inner = run_sequential

        if phase is None:
            return inner

        def timed(frame):
            start = time.perf_counter()
            inner(frame)
            self.ctx.add_phase(phase, time.perf_counter() - start)

        return timed

    def _worker_merge_plan(self, loop_summary):
        """Scalar reduction and min/max-guard targets that need per-worker cells."""
        reductions = []
        guards = []
        if loop_summary is None:
            return reductions, guards
        for site in loop_summary.writes:
            target = site.target
            if not isinstance(target, ast.Identifier):
                continue
            binding = getattr(target, "_binding", None)
            if binding is None or binding[0] != "sym":
                continue
            sym = binding[1]
            if sym.name in loop_summary.local_names:
                continue
            if site.kind == anl.REDUCTION and sym not in reductions:
                reductions.append(sym)
            elif site.kind == anl.MIN_GUARD and (sym, True) not in guards:
                guards.append((sym, True))
            elif site.kind == anl.MAX_GUARD and (sym, False) not in guards:
                guards.append((sym, False))
        return reductions, guards

    def _c_FixedPoint(self, stmt: ast.FixedPoint) -> Callable:
        flag_sym = stmt._flag_sym
        body = self._compile_block(stmt.body)
        pairs = stmt._buffer_pairs
        pred = self._compile_predicate(stmt.predicate)

        def run(frame):
            ctx = self.ctx
            cap = ctx.iteration_cap()
            iterations = 0
            while True:
                done = pred(frame)
                if flag_sym is not None:
                    frame[flag_sym].value = done
                if done:
                    break
                if iterations >= cap:
                    raise DivergenceError(
                        f"fixed point exceeded {cap} iterations", stmt.span
                    )
                body(frame)
                for base_sym, nxt_sym in pairs:
                    frame[base_sym].swap_from(frame[nxt_sym])
                iterations += 1
            ctx.fixedpoint_iterations.append(iterations)

        return run

    def _compile_predicate(self, predicate: ast.Expr) -> Callable:
        # fast path: "!prop" over a bool node property
        if (
            isinstance(predicate, ast.UnaryOp)
            and predicate.op == "!"
            and isinstance(predicate.operand, ast.Identifier)
            and getattr(predicate.operand, "_binding", ("",))[0] == "prop_elem"
        ):
            sym = predicate.operand._binding[1]

            def fast(frame):
                return not bool(frame[sym].data.any())

            return fast
        compiled = self._compile_expr(predicate)
        elemwise = any(
            getattr(node, "_binding", ("",))[0] in ("prop_elem", "elem_field")
            for node in ast.walk(predicate)
            if isinstance(node, ast.Identifier)
        )
        if not elemwise:
            return compiled

        def aggregate(frame):
            n = self.ctx.gview.node_count
            for v in range(n):
                frame["_elem"] = v
                if not compiled(frame):
                    return False
            return True

        return aggregate

    def _c_Batch(self, stmt: ast.Batch) -> Callable:
        updates_sym = self._batch_updates_symbol(stmt)
        size = self._compile_expr(stmt.size)
        body_stmts = [self._compile_stmt(s) for s in stmt.body.statements]

        def run(frame):
            ctx = self.ctx
            stream = frame[updates_sym]
            batch_size = int(size(frame))
            if batch_size <= 0:
                raise ExecError("batch size must be positive", stmt.span)
            for index, batch in enumerate(stream.batches(batch_size)):
                ctx.current_batch = batch
                ctx.batch_stats.append(
                    {
                        "index": index,
                        "adds": len(batch.adds),
                        "deletes": len(batch.deletes),
                    }
                )
                for s in body_stmts:
                    s(frame)
                if ctx.gview.merge_due(index):
                    start = time.perf_counter()
                    ctx.gview.merge()
                    ctx.add_phase("merge", time.perf_counter() - start)
            ctx.current_batch = None

        return run

    def _batch_updates_symbol(self, stmt: ast.Batch):
        sym = getattr(stmt, "_updates_sym", None)
        if sym is None:
            raise ExecError(f"internal: no updates symbol {stmt.updates_var!r}", stmt.span)
        return sym

    # -- expressions ------------------------------------------------------------------

    def _compile_expr(self, expr: ast.Expr) -> Callable:
        name = type(expr).__name__
        return getattr(self, f"_e_{name}")(expr)

    def _e_Literal(self, expr: ast.Literal) -> Callable:
        if expr.kind == "inf":
            value = math.inf if getattr(expr, "_num_type", "int") == "float" else INT_INF
        else:
            value = expr.value
        return lambda frame, value=value: value

    def _e_Identifier(self, expr: ast.Identifier) -> Callable:
        kind, payload = expr._binding
        if kind == "sym":
            sym = payload
            if sym.type.name in _OBJECT_TYPES:
                return lambda frame, sym=sym: frame[sym]
            return lambda frame, sym=sym: frame[sym].value
        if kind == "prop_elem":
            sym = payload
            return lambda frame, sym=sym: frame[sym].get(frame["_elem"])
        getter = _EDGE_FIELD_GETTERS[payload]
        return lambda frame, getter=getter: getter(frame["_elem"])

    def _e_PropertyAccess(self, expr: ast.PropertyAccess) -> Callable:
        kind, payload = expr._kind
        obj = self._compile_expr(expr.obj)
        if kind == "edge_field":
            getter = _EDGE_FIELD_GETTERS[payload]
            return lambda frame: getter(obj(frame))
        sym = payload
        return lambda frame: frame[sym].get(obj(frame))

    def _e_IndexAccess(self, expr: ast.IndexAccess) -> Callable:
        obj = self._compile_expr(expr.obj)
        index = self._compile_expr(expr.index)
        return lambda frame: obj(frame).get(index(frame))

    def _e_UnaryOp(self, expr: ast.UnaryOp) -> Callable:
        operand = self._compile_expr(expr.operand)
        if expr.op == "!":
            return lambda frame: not operand(frame)
        return lambda frame: -operand(frame)

    def _e_BinaryOp(self, expr: ast.BinaryOp) -> Callable:
        op = expr.op
        left = self._compile_expr(expr.left)
        right = self._compile_expr(expr.right)
        if op == "&&":
            return lambda frame: left(frame) and right(frame)
        if op == "||":
            return lambda frame: left(frame) or right(frame)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            import operator

            fn = {
                "==": operator.eq,
                "!=": operator.ne,
                "<": operator.lt,
                "<=": operator.le,
                ">": operator.gt,
                ">=": operator.ge,
            }[op]
            return lambda frame: fn(left(frame), right(frame))
        result_type = getattr(expr, "_type", None)
        is_int = result_type is not None and result_type.name in ("int", "long", "node")
        if op == "+":
            if is_int:
                return lambda frame: _sat_add(left(frame), right(frame))
            return lambda frame: left(frame) + right(frame)
        if op == "-":
            if is_int:
                return lambda frame: _sat_sub(left(frame), right(frame))
            return lambda frame: left(frame) - right(frame)
        if op == "*":
            return lambda frame: left(frame) * right(frame)
        if op == "/":
            if is_int:
                return lambda frame: _int_div(left(frame), right(frame))
            return lambda frame: left(frame) / right(frame)
        if op == "%":
            return lambda frame: left(frame) % right(frame)
        raise ExecError(f"internal: unknown operator {op}", expr.span)

    def _e_MethodCall(self, expr: ast.MethodCall) -> Callable:
        builtin = getattr(expr, "_builtin", None)
        if builtin == "nodes":
            return lambda frame: range(self.ctx.gview.node_count)
        if builtin == "neighbors":
            arg = self._compile_expr(expr.args[0])
            return lambda frame: self.ctx.gview.neighbors(arg(frame), frame)
        if builtin == "nodesTo":
            arg = self._compile_expr(expr.args[0])
            return lambda frame: self.ctx.gview.nodes_to(arg(frame), frame)
        if builtin == "num_nodes":
            return lambda frame: self.ctx.gview.node_count
        if builtin == "currentBatch":
            return lambda frame: self.ctx.current_batch
        raise ExecError(f"method {expr.name!r} has no value form", expr.span)

    def _e_CallExpr(self, expr: ast.CallExpr) -> Callable:
        target = expr._target
        arg_fns = []
        for arg, ptype in zip(expr.args, target._param_types):
            compiled = self._compile_expr(arg)
            if ptype.name in _OBJECT_TYPES:
                arg_fns.append(compiled)
            else:
                conv = _SCALAR_CONV[ptype.name]
                arg_fns.append(lambda frame, c=compiled, conv=conv: conv(c(frame)))

        def run(frame):
            args = [fn(frame) for fn in arg_fns]
            return self._call_function(target, args)

        return run

    # -- write targets -------------------------------------------------------------

    def _compile_writer(self, target: ast.Expr) -> Callable:
        """Returns write(frame, value)."""
        debug = self.debug
        if isinstance(target, ast.Identifier):
            kind, payload = target._binding
            if kind != "sym":
                raise ExecError("cannot assign through an implicit element read", target.span)
            sym = payload
            conv = _SCALAR_CONV.get(sym.type.name, lambda v: v)
            if debug:
                def write(frame, value, sym=sym, conv=conv):
                    cell = frame[sym]
                    # key by cell serial: block-scoped locals get a fresh
                    # cell each iteration and must not look contended
                    self._log_write(frame, sym.name, cell.uid)
                    cell.value = conv(value)
                return write
            def write(frame, value, sym=sym, conv=conv):
                frame[sym].value = conv(value)
            return write
        if isinstance(target, ast.PropertyAccess):
            kind, payload = target._kind
            if kind == "edge_field":
                raise ExecError("edge fields are read-only", target.span)
            sym = payload
            obj = self._compile_expr(target.obj)
            bill = self.partitioned and kind == "node_prop"
            if debug:
                def write(frame, value, sym=sym, obj=obj):
                    idx = obj(frame)
                    self._log_write(frame, sym.name, (sym, _key_of(idx)))
                    frame[sym].set(idx, value)
                return write
            if bill:
                def write(frame, value, sym=sym, obj=obj):
                    idx = obj(frame)
                    self.ctx.gview.bill_node_write(idx, frame)
                    frame[sym].set(idx, value)
                return write
            def write(frame, value, sym=sym, obj=obj):
                frame[sym].set(obj(frame), value)
            return write
        if isinstance(target, ast.IndexAccess):
            table = self._compile_expr(target.obj)
            index = self._compile_expr(target.index)
            def write(frame, value):
                table(frame).set(index(frame), value)
            return write
        raise ExecError("not an assignable location", target.span)

    def _log_write(self, frame, location: str, key) -> None:
        wlog = frame.get("_wlog")
        if wlog is not None:
            loop_id, log = wlog
            log.append((location, key, frame.get("_iter", -1)))

    # -- loop domains ---------------------------------------------------------------

    def _compile_domain(self, source: ast.Expr) -> Callable:
        compiled = self._compile_expr(source)

        def domain(frame):
            items = compiled(frame)
            if isinstance(items, UpdateBatch):
                return [EdgeRef(r.src, r.dst, r.weight, -1, -1) for r in items.records]
            if isinstance(items, UpdateStream):
                return [EdgeRef(r.src, r.dst, r.weight, -1, -1) for r in items.records]
            return items

        return domain


def _chunk(items: list, parts: int) -> List[list]:
    n = len(items)
    size = (n + parts - 1) // parts
    return [items[i : i + size] for i in range(0, n, size)]


def _elem_home(gview, elem) -> int:
    if isinstance(elem, EdgeRef):
        return gview.owner_of(elem.source)
    return gview.owner_of(elem)


def _key_of(idx) -> object:
    if isinstance(idx, EdgeRef):
        return (idx.segment, idx.index)
    return idx

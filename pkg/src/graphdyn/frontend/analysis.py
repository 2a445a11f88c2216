"""Read/write-set analysis for parallel loops.

The engine and the code generator both consume this: every write that two
distinct iterations of a parallel loop could alias is classified so that it
can be lowered to the right synchronization (guarded retry for Min/Max,
fetch-op for reductions, atomic store for plain flag writes).  Writes whose
index is the parallel loop variable itself are private.

The rule is deliberately conservative: aliasing is assumed unless both
writes index the loop variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Set

from . import ast

# write classifications
PRIVATE = "private"
ATOMIC_STORE = "atomic_store"
MIN_GUARD = "min"
MAX_GUARD = "max"
REDUCTION = "reduction"


@dataclass
class WriteSite:
    stmt: ast.Stmt
    target: ast.Expr
    location: str  # property or scalar name
    kind: str  # PRIVATE / ATOMIC_STORE / MIN_GUARD / MAX_GUARD / REDUCTION
    reduce_op: Optional[str] = None

    @property
    def needs_atomic(self) -> bool:
        return self.kind != PRIVATE


@dataclass
class LoopSummary:
    loop: ast.Stmt  # ForAll | OnAdd | OnDelete
    var: str
    reads: Set[str] = field(default_factory=set)
    writes: List[WriteSite] = field(default_factory=list)
    local_names: Set[str] = field(default_factory=set)  # declared inside the body

    @property
    def flagged(self) -> Set[str]:
        return {w.location for w in self.writes if w.needs_atomic}

    @property
    def written(self) -> Set[str]:
        return {w.location for w in self.writes}


@dataclass
class AccessSummary:
    loops: List[LoopSummary] = field(default_factory=list)

    def for_loop(self, loop: ast.Stmt) -> Optional[LoopSummary]:
        for s in self.loops:
            if s.loop is loop:
                return s
        return None

    def flagged_everywhere(self) -> Set[str]:
        out: Set[str] = set()
        for s in self.loops:
            out |= s.flagged
        return out


def _location_name(target: ast.Expr) -> Optional[str]:
    """The property / scalar a write lands in, or None when untrackable."""
    if isinstance(target, ast.Identifier):
        return target.name
    if isinstance(target, ast.PropertyAccess):
        return target.name
    if isinstance(target, ast.IndexAccess) and isinstance(target.obj, ast.Identifier):
        return target.obj.name
    return None


def _indexes_loop_var(target: ast.Expr, loop_var: str) -> bool:
    """True when the write can only touch the loop variable's own cell."""
    if isinstance(target, ast.PropertyAccess):
        return isinstance(target.obj, ast.Identifier) and target.obj.name == loop_var
    if isinstance(target, ast.IndexAccess):
        return isinstance(target.index, ast.Identifier) and target.index.name == loop_var
    return False  # scalars always alias across iterations


def _collect_reads(expr: object, out: Set[str]) -> None:
    for node in ast.walk(expr):
        if isinstance(node, ast.Identifier):
            out.add(node.name)
        elif isinstance(node, ast.PropertyAccess):
            out.add(node.name)


class _Analyzer:
    def __init__(self):
        self.summary = AccessSummary()

    def analyze_program(self, program: ast.Program) -> AccessSummary:
        for fn in program.functions:
            self.visit_block(fn.body, current=None)
        return self.summary

    # `current` is the summary of the innermost PARALLEL loop, or None
    def visit_block(self, block: ast.BlockStmt, current: Optional[LoopSummary]) -> None:
        for stmt in block.statements:
            self.visit_stmt(stmt, current)

    def visit_stmt(self, stmt: ast.Stmt, current: Optional[LoopSummary]) -> None:
        if isinstance(stmt, ast.BlockStmt):
            self.visit_block(stmt, current)
        elif isinstance(stmt, (ast.ForAll, ast.OnAdd, ast.OnDelete)):
            parallel = getattr(stmt, "parallel", True)
            if current is None and parallel:
                loop = LoopSummary(stmt, stmt.var)
                self.summary.loops.append(loop)
                stmt._parallel_effective = True
                if isinstance(stmt, ast.ForAll) and stmt.filter is not None:
                    _collect_reads(stmt.filter, loop.reads)
                self.visit_block(stmt.body, loop)
            else:
                # nested loops run sequentially inside one outer iteration;
                # their writes still belong to the outer summary but are
                # indexed by *this* loop's variable, which varies within one
                # outer iteration, so they can never be private
                stmt._parallel_effective = False
                self.visit_block(stmt.body, current)
        elif isinstance(stmt, ast.Assignment):
            if current is not None:
                self.record_write(current, stmt, stmt.target, None)
                _collect_reads(stmt.value, current.reads)
        elif isinstance(stmt, ast.ReduceAssign):
            if current is not None:
                self.record_write(current, stmt, stmt.target, stmt.op)
                if stmt.value is not None:
                    _collect_reads(stmt.value, current.reads)
        elif isinstance(stmt, (ast.MinAssign, ast.MaxAssign)):
            if current is not None:
                kind = MIN_GUARD if isinstance(stmt, ast.MinAssign) else MAX_GUARD
                for target in stmt.targets:
                    self.record_classified(current, stmt, target, kind)
                for value in stmt.values:
                    _collect_reads(value, current.reads)
        elif isinstance(stmt, ast.If):
            if current is not None:
                _collect_reads(stmt.cond, current.reads)
            self.visit_stmt(stmt.then, current)
            if stmt.els is not None:
                self.visit_stmt(stmt.els, current)
        elif isinstance(stmt, ast.While):
            if current is not None:
                _collect_reads(stmt.cond, current.reads)
            self.visit_stmt(stmt.body, current)
        elif isinstance(stmt, ast.FixedPoint):
            self.visit_block(stmt.body, current)
        elif isinstance(stmt, ast.Batch):
            self.visit_block(stmt.body, current)
        elif isinstance(stmt, ast.ExprStmt):
            if current is not None:
                _collect_reads(stmt.expr, current.reads)
        elif isinstance(stmt, ast.Return):
            if current is not None and stmt.value is not None:
                _collect_reads(stmt.value, current.reads)
        elif isinstance(stmt, ast.Declaration):
            if current is not None:
                current.local_names.add(stmt.name)
                if stmt.init is not None:
                    _collect_reads(stmt.init, current.reads)

    def _is_private(self, loop: LoopSummary, target: ast.Expr) -> bool:
        if isinstance(target, ast.Identifier) and target.name in loop.local_names:
            return True  # declared inside the body: one instance per iteration
        return _indexes_loop_var(target, loop.var)

    def record_write(self, loop: LoopSummary, stmt, target, reduce_op: Optional[str]) -> None:
        location = _location_name(target)
        if location is None:
            location = "<unknown>"
        if reduce_op is not None:
            kind = PRIVATE if self._is_private(loop, target) else REDUCTION
            loop.writes.append(WriteSite(stmt, target, location, kind, reduce_op))
            return
        kind = PRIVATE if self._is_private(loop, target) else ATOMIC_STORE
        loop.writes.append(WriteSite(stmt, target, location, kind))

    def record_classified(self, loop: LoopSummary, stmt, target, kind: str) -> None:
        location = _location_name(target) or "<unknown>"
        loop.writes.append(WriteSite(stmt, target, location, kind))


def analyze_access(program: ast.Program) -> AccessSummary:
    """Total analysis: never fails, only classifies."""
    return _Analyzer().analyze_program(program)

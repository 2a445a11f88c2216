"""Semantic analysis: scoped symbol resolution, typing, and structure rules.

The checker annotates the AST in place for later stages:

  Identifier._binding   ("sym", Symbol) | ("prop_elem", Symbol) | ("elem_field", name)
  PropertyAccess._kind  ("edge_field", name) | ("node_prop", Symbol) | ("edge_prop", Symbol)
  MethodCall._builtin   builtin name, when the call is part of the graph surface
  CallExpr._target      resolved FunctionDecl
  Literal._num_type     "int" | "float", for the polymorphic INF literal
  FunctionDecl._return_type, FunctionDecl._param_types

Diagnostics are collected, never raised one-at-a-time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import ast
from .diagnostics import Diagnostic, error
from .types import (
    BOOL, DOUBLE, EDGE, ERROR, FLOAT, GRAPH, INT, INT_LIKE, LONG, NODE,
    UPDATES, VOID, Symbol, SymbolTable, Type, is_assignable, is_numeric,
    iter_of, join_numeric, resolve_type,
)

INFLIT = Type("<inf>")
BATCH = Type("batch")  # updateList.currentBatch(): iterable of edge records

EDGE_FIELDS = {"source": NODE, "destination": NODE, "weight": INT}

# graph method -> (positional arg types, result); None marks special handling
GRAPH_METHODS: Dict[str, Tuple[Tuple[Type, ...], Type]] = {
    "nodes": ((), iter_of(NODE)),
    "neighbors": ((NODE,), iter_of(EDGE)),
    "nodesTo": ((NODE,), iter_of(EDGE)),
    "num_nodes": ((), INT),
    "updateCSRAdd": ((BATCH,), VOID),
    "updateCSRDel": ((BATCH,), VOID),
}


def _assignable(target: Type, value: Type) -> bool:
    if value == INFLIT:
        return is_numeric(target)
    return is_assignable(target, value)


@dataclass
class CheckedFunction:
    decl: ast.FunctionDecl
    return_type: Type
    param_types: List[Type]


@dataclass
class CheckResult:
    program: ast.Program
    diagnostics: List[Diagnostic]
    symbols: SymbolTable
    functions: Dict[str, CheckedFunction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


class TypeChecker:
    def __init__(self, program: ast.Program):
        self.program = program
        self.diagnostics: List[Diagnostic] = []
        self.symbols = SymbolTable()
        self.functions: Dict[str, CheckedFunction] = {}
        self._in_progress: set = set()
        self._batch_depth = 0
        self._current_return: List[Optional[Type]] = []

    def err(self, message: str, span) -> Type:
        self.diagnostics.append(error(message, span))
        return ERROR

    # -- program ---------------------------------------------------------------

    def check(self) -> CheckResult:
        seen = {}
        for fn in self.program.functions:
            if fn.name in seen:
                self.err(f"duplicate function name {fn.name!r}", fn.span)
            seen[fn.name] = fn
        for fn in self.program.functions:
            self.ensure_checked(fn)
        return CheckResult(self.program, self.diagnostics, self.symbols, self.functions)

    def ensure_checked(self, fn: ast.FunctionDecl) -> CheckedFunction:
        if fn.name in self.functions:
            return self.functions[fn.name]
        if fn.name in self._in_progress:
            # recursive call: assume void; a use of the value reports later
            return CheckedFunction(fn, VOID, [resolve_type(p.type) for p in fn.params])
        self._in_progress.add(fn.name)
        self.symbols.push()
        param_types = []
        for p in fn.params:
            ptype = resolve_type(p.type)
            if ptype == ERROR:
                self.err(f"unknown parameter type {p.type}", p.span)
            param_types.append(ptype)
            if not self.symbols.declare(Symbol(p.name, ptype, True, p.span, is_param=True)):
                self.err(f"duplicate parameter {p.name!r}", p.span)
        self._current_return.append(None)
        self.check_block(fn.body, push_scope=False)
        ret = self._current_return.pop() or VOID
        self.symbols.pop()
        self._in_progress.discard(fn.name)
        checked = CheckedFunction(fn, ret, param_types)
        fn._return_type = ret
        fn._param_types = param_types
        self.functions[fn.name] = checked
        return checked

    # -- statements ---------------------------------------------------------------

    def check_block(self, block: ast.BlockStmt, push_scope: bool = True) -> None:
        if push_scope:
            self.symbols.push()
        for stmt in block.statements:
            self.check_stmt(stmt)
        if push_scope:
            self.symbols.pop()

    def check_stmt(self, stmt: ast.Stmt) -> None:
        method = getattr(self, f"check_{type(stmt).__name__}", None)
        if method is None:
            self.err(f"unsupported statement {type(stmt).__name__}", stmt.span)
            return
        method(stmt)

    def check_BlockStmt(self, stmt: ast.BlockStmt) -> None:
        self.check_block(stmt)

    def check_Declaration(self, stmt: ast.Declaration) -> None:
        dtype = resolve_type(stmt.type)
        if dtype == ERROR:
            self.err(f"unknown type {stmt.type}", stmt.span)
        if stmt.init is not None:
            itype = self.check_expr(stmt.init, expected=dtype)
            if not _assignable(dtype, itype):
                self.err(f"cannot initialize {dtype} with {itype}", stmt.span)
        if not self.symbols.declare(Symbol(stmt.name, dtype, True, stmt.span)):
            self.err(f"{stmt.name!r} already declared in this scope", stmt.span)

    def check_Assignment(self, stmt: ast.Assignment) -> None:
        ttype = self.check_lvalue(stmt.target)
        vtype = self.check_expr(stmt.value, expected=ttype)
        if not _assignable(ttype, vtype):
            self.err(f"cannot assign {vtype} to {ttype}", stmt.span)

    def check_ReduceAssign(self, stmt: ast.ReduceAssign) -> None:
        ttype = self.check_lvalue(stmt.target)
        if ttype != ERROR and not is_numeric(ttype):
            self.err(f"reduction target must be numeric, found {ttype}", stmt.span)
        if stmt.op == "++":
            if ttype not in (*INT_LIKE, ERROR):
                self.err(f"++ needs an integer target, found {ttype}", stmt.span)
            return
        vtype = self.check_expr(stmt.value, expected=ttype)
        if not _assignable(ttype, vtype) and join_numeric(ttype, vtype) is None:
            self.err(f"cannot apply {stmt.op} with {vtype} to {ttype}", stmt.span)

    def check_If(self, stmt: ast.If) -> None:
        ctype = self.check_expr(stmt.cond)
        if ctype not in (BOOL, ERROR):
            self.err(f"if condition must be bool, found {ctype}", stmt.cond.span)
        self.check_stmt(stmt.then)
        if stmt.els is not None:
            self.check_stmt(stmt.els)

    def check_While(self, stmt: ast.While) -> None:
        ctype = self.check_expr(stmt.cond)
        if ctype not in (BOOL, ERROR):
            self.err(f"while condition must be bool, found {ctype}", stmt.cond.span)
        self.check_stmt(stmt.body)

    def check_ForAll(self, stmt: ast.ForAll) -> None:
        src_type = self.check_expr(stmt.source)
        elem = ERROR
        if src_type.name == "iter":
            elem = src_type.arg
        elif src_type == BATCH:
            elem = EDGE
        elif src_type != ERROR:
            self.err(f"cannot iterate over {src_type}", stmt.source.span)
        self.symbols.push()
        self.symbols.declare(Symbol(stmt.var, elem, False, stmt.span))
        if stmt.filter is not None:
            ftype = self.check_expr(stmt.filter, elem_deref=(stmt.var, elem))
            if ftype not in (BOOL, ERROR):
                self.err(f"filter predicate must be bool, found {ftype}", stmt.filter.span)
        self.check_block(stmt.body, push_scope=False)
        self.symbols.pop()

    def check_FixedPoint(self, stmt: ast.FixedPoint) -> None:
        flag = self.symbols.lookup(stmt.flag)
        if flag is None:
            self.err(f"unknown convergence flag {stmt.flag!r}", stmt.span)
        elif flag.type not in (BOOL, ERROR):
            self.err(f"convergence flag must be bool, found {flag.type}", stmt.span)
        stmt._flag_sym = flag
        ptype = self.check_expr(stmt.predicate, elem_deref=(None, NODE))
        if ptype not in (BOOL, ERROR):
            self.err(f"convergence predicate must be bool, found {ptype}", stmt.predicate.span)
        # double-buffered pairs visible here: <p> paired with <p>_nxt swaps at
        # iteration boundaries
        pairs = []
        seen = {}
        for scope in self.symbols.scopes:
            seen.update(scope)
        for name, sym in seen.items():
            if name.endswith("_nxt") and sym.type.name in ("propNode", "propEdge"):
                base = seen.get(name[: -len("_nxt")])
                if base is not None and base.type == sym.type:
                    pairs.append((base, sym))
        stmt._buffer_pairs = pairs
        self.check_block(stmt.body)

    def check_Batch(self, stmt: ast.Batch) -> None:
        sym = self.symbols.lookup(stmt.updates_var)
        if sym is None:
            self.err(f"unknown update list {stmt.updates_var!r}", stmt.span)
        elif sym.type not in (UPDATES, ERROR):
            self.err(f"Batch needs an updates variable, found {sym.type}", stmt.span)
        stmt._updates_sym = sym
        stype = self.check_expr(stmt.size)
        if stype not in (INT, LONG, ERROR):
            self.err(f"batch size must be an integer, found {stype}", stmt.size.span)
        self._batch_depth += 1
        self.check_block(stmt.body)
        self._batch_depth -= 1

    def _check_on_update(self, stmt, keyword: str) -> None:
        if self._batch_depth == 0:
            self.err(f"{keyword} is only valid inside a Batch block", stmt.span)
        src_type = self.check_expr(stmt.source)
        if src_type not in (BATCH, UPDATES, ERROR):
            self.err(f"{keyword} iterates over a batch, found {src_type}", stmt.source.span)
        self.symbols.push()
        self.symbols.declare(Symbol(stmt.var, EDGE, False, stmt.span))
        self.check_block(stmt.body, push_scope=False)
        self.symbols.pop()

    def check_OnAdd(self, stmt: ast.OnAdd) -> None:
        self._check_on_update(stmt, "OnAdd")

    def check_OnDelete(self, stmt: ast.OnDelete) -> None:
        self._check_on_update(stmt, "OnDelete")

    def _check_min_max(self, stmt, keyword: str) -> None:
        first = True
        for target, value in zip(stmt.targets, stmt.values):
            ttype = self.check_lvalue(target)
            if first and ttype != ERROR and not is_numeric(ttype):
                self.err(f"{keyword} guard location must be numeric, found {ttype}", target.span)
            first = False
            vtype = self.check_expr(value, expected=ttype)
            if not _assignable(ttype, vtype):
                self.err(f"cannot assign {vtype} to {ttype} in {keyword}", value.span)

    def check_MinAssign(self, stmt: ast.MinAssign) -> None:
        self._check_min_max(stmt, "Min")

    def check_MaxAssign(self, stmt: ast.MaxAssign) -> None:
        self._check_min_max(stmt, "Max")

    def check_ExprStmt(self, stmt: ast.ExprStmt) -> None:
        self.check_expr(stmt.expr)

    def check_Return(self, stmt: ast.Return) -> None:
        rtype = VOID if stmt.value is None else self.check_expr(stmt.value)
        current = self._current_return[-1]
        if current is None or current == ERROR:
            self._current_return[-1] = rtype
        elif rtype not in (current, ERROR) and join_numeric(current, rtype) is None:
            self.err(f"return type mismatch: {rtype} vs earlier {current}", stmt.span)

    # -- lvalues and expressions ---------------------------------------------------

    def check_lvalue(self, expr: ast.Expr) -> Type:
        t = self._lvalue_type(expr)
        expr._type = t
        return t

    def _lvalue_type(self, expr: ast.Expr) -> Type:
        if isinstance(expr, ast.Identifier):
            sym = self.symbols.lookup(expr.name)
            if sym is None:
                return self.err(f"unknown identifier {expr.name!r}", expr.span)
            if not sym.mutable:
                self.err(f"cannot assign to loop variable {expr.name!r}", expr.span)
            expr._binding = ("sym", sym)
            if sym.type.name in ("propNode", "propEdge"):
                return self.err(
                    f"{expr.name!r} is a property table; assign through an element", expr.span
                )
            return sym.type
        if isinstance(expr, ast.PropertyAccess):
            return self._check_property_access(expr, writing=True)
        if isinstance(expr, ast.IndexAccess):
            return self._check_index(expr)
        return self.err("not an assignable location", expr.span)

    def check_expr(self, expr: ast.Expr, expected: Optional[Type] = None,
                   elem_deref: Optional[Tuple[Optional[str], Type]] = None) -> Type:
        t = self._expr(expr, expected, elem_deref)
        expr._type = t
        return t

    def _expr(self, expr, expected, elem_deref) -> Type:
        if isinstance(expr, ast.Literal):
            if expr.kind == "int":
                return INT
            if expr.kind == "float":
                return FLOAT
            if expr.kind == "bool":
                return BOOL
            # INF adapts to its context; default to int when nothing is known
            if expected is not None and is_numeric(expected):
                expr._num_type = "float" if expected in (FLOAT, DOUBLE) else "int"
            else:
                expr._num_type = getattr(expr, "_num_type", "int")
            return INFLIT

        if isinstance(expr, ast.Identifier):
            sym = self.symbols.lookup(expr.name)
            if sym is None:
                if elem_deref is not None and elem_deref[1] == EDGE and expr.name in EDGE_FIELDS:
                    expr._binding = ("elem_field", expr.name)
                    return EDGE_FIELDS[expr.name]
                return self.err(f"unknown identifier {expr.name!r}", expr.span)
            # bare property names inside filter / convergence predicates read
            # the element's value
            if elem_deref is not None and sym.type.name == "propNode" and elem_deref[1] == NODE:
                expr._binding = ("prop_elem", sym)
                return sym.type.arg
            if elem_deref is not None and sym.type.name == "propEdge" and elem_deref[1] == EDGE:
                expr._binding = ("prop_elem", sym)
                return sym.type.arg
            expr._binding = ("sym", sym)
            return sym.type

        if isinstance(expr, ast.UnaryOp):
            otype = self.check_expr(expr.operand, elem_deref=elem_deref)
            if expr.op == "!":
                if otype not in (BOOL, ERROR):
                    return self.err(f"! needs bool, found {otype}", expr.span)
                return BOOL
            if otype == INFLIT:
                return INFLIT
            if not is_numeric(otype) and otype != ERROR:
                return self.err(f"unary - needs a number, found {otype}", expr.span)
            return otype

        if isinstance(expr, ast.BinaryOp):
            return self._binary(expr, expected, elem_deref)

        if isinstance(expr, ast.PropertyAccess):
            return self._check_property_access(expr, writing=False, elem_deref=elem_deref)

        if isinstance(expr, ast.IndexAccess):
            return self._check_index(expr, elem_deref=elem_deref)

        if isinstance(expr, ast.MethodCall):
            return self._method_call(expr, elem_deref)

        if isinstance(expr, ast.CallExpr):
            return self._call(expr, elem_deref)

        return self.err(f"unsupported expression {type(expr).__name__}", expr.span)

    def _binary(self, expr: ast.BinaryOp, expected, elem_deref) -> Type:
        op = expr.op
        if op in ("&&", "||"):
            lt = self.check_expr(expr.left, elem_deref=elem_deref)
            rt = self.check_expr(expr.right, elem_deref=elem_deref)
            for t, side in ((lt, expr.left), (rt, expr.right)):
                if t not in (BOOL, ERROR):
                    self.err(f"{op} needs bool operands, found {t}", side.span)
            return BOOL
        if op in ("==", "!=", "<", "<=", ">", ">="):
            lt = self.check_expr(expr.left, elem_deref=elem_deref)
            rt = self.check_expr(expr.right, expected=lt if lt != INFLIT else None,
                                 elem_deref=elem_deref)
            if ERROR in (lt, rt):
                return BOOL
            if lt == INFLIT or rt == INFLIT:
                other = rt if lt == INFLIT else lt
                if not is_numeric(other):
                    self.err(f"cannot compare {lt} with {rt}", expr.span)
                return BOOL
            if op in ("==", "!=") and lt == rt == BOOL:
                return BOOL
            if is_numeric(lt) and is_numeric(rt):
                return BOOL
            self.err(f"cannot compare {lt} with {rt}", expr.span)
            return BOOL
        # arithmetic
        lt = self.check_expr(expr.left, expected=expected, elem_deref=elem_deref)
        rt = self.check_expr(expr.right, expected=expected, elem_deref=elem_deref)
        if ERROR in (lt, rt):
            return ERROR
        if INFLIT in (lt, rt):
            other = rt if lt == INFLIT else lt
            if other == INFLIT:
                return INFLIT
            if not is_numeric(other):
                return self.err(f"cannot apply {op} to {lt} and {rt}", expr.span)
            return other
        joined = join_numeric(lt, rt)
        if joined is None:
            return self.err(f"cannot apply {op} to {lt} and {rt}", expr.span)
        if op == "%" and joined not in (INT, LONG):
            return self.err("% needs integer operands", expr.span)
        return joined

    def _check_property_access(self, expr: ast.PropertyAccess, writing: bool,
                               elem_deref=None) -> Type:
        obj_type = self.check_expr(expr.obj, elem_deref=elem_deref)
        if obj_type == ERROR:
            return ERROR
        if obj_type == EDGE:
            if expr.name in EDGE_FIELDS:
                if writing:
                    return self.err(f"edge field {expr.name!r} is read-only", expr.span)
                expr._kind = ("edge_field", expr.name)
                return EDGE_FIELDS[expr.name]
            sym = self.symbols.lookup(expr.name)
            if sym is not None and sym.type.name == "propEdge":
                expr._kind = ("edge_prop", sym)
                return sym.type.arg
            return self.err(f"unknown edge field or property {expr.name!r}", expr.span)
        if obj_type == NODE:
            sym = self.symbols.lookup(expr.name)
            if sym is not None and sym.type.name == "propNode":
                expr._kind = ("node_prop", sym)
                return sym.type.arg
            return self.err(f"unknown node property {expr.name!r}", expr.span)
        return self.err(f"{obj_type} has no accessible fields", expr.span)

    def _check_index(self, expr: ast.IndexAccess, elem_deref=None) -> Type:
        obj_type = self.check_expr(expr.obj, elem_deref=elem_deref)
        idx_type = self.check_expr(expr.index, elem_deref=elem_deref)
        if obj_type.name in ("propNode", "propEdge"):
            if idx_type not in (*INT_LIKE, EDGE, ERROR):
                self.err(f"property index must be a node or edge, found {idx_type}", expr.span)
            return obj_type.arg
        if obj_type != ERROR:
            self.err(f"{obj_type} cannot be indexed", expr.span)
        return ERROR

    def _method_call(self, expr: ast.MethodCall, elem_deref) -> Type:
        obj_type = self.check_expr(expr.obj, elem_deref=elem_deref)
        name = expr.name
        if obj_type == ERROR:
            for a in expr.args:
                self.check_expr(a, elem_deref=elem_deref)
            return ERROR
        if obj_type == GRAPH:
            if name in ("attachNodeProperty", "attachEdgeProperty"):
                want = "propNode" if name == "attachNodeProperty" else "propEdge"
                if expr.args:
                    self.err(f"{name} takes only name=value initializers", expr.span)
                attach = []
                for prop_name, value in expr.kwargs:
                    sym = self.symbols.lookup(prop_name)
                    if sym is None or sym.type.name != want:
                        self.err(f"{prop_name!r} is not a declared {want} property", expr.span)
                        self.check_expr(value)
                        continue
                    vtype = self.check_expr(value, expected=sym.type.arg)
                    if not _assignable(sym.type.arg, vtype):
                        self.err(
                            f"cannot initialize {want}<{sym.type.arg}> {prop_name!r} with {vtype}",
                            value.span,
                        )
                    attach.append((sym, value))
                expr._builtin = name
                expr._attach = attach
                return VOID
            if name == "propagateNodeFlags":
                if len(expr.args) != 1 or expr.kwargs:
                    self.err("propagateNodeFlags takes one bool node property", expr.span)
                    return VOID
                arg = expr.args[0]
                atype = self.check_expr(arg)
                if not (atype.name == "propNode" and atype.arg == BOOL) and atype != ERROR:
                    self.err(f"propagateNodeFlags needs propNode<bool>, found {atype}", arg.span)
                expr._builtin = name
                return VOID
            if name in GRAPH_METHODS:
                arg_types, result = GRAPH_METHODS[name]
                if expr.kwargs:
                    self.err(f"{name} takes no named arguments", expr.span)
                if len(expr.args) != len(arg_types):
                    self.err(
                        f"{name} expects {len(arg_types)} argument(s), got {len(expr.args)}",
                        expr.span,
                    )
                for arg, want in zip(expr.args, arg_types):
                    have = self.check_expr(arg, elem_deref=elem_deref)
                    if want == BATCH:
                        if have not in (BATCH, UPDATES, ERROR):
                            self.err(f"{name} needs a batch, found {have}", arg.span)
                    elif not _assignable(want, have):
                        self.err(f"{name} argument must be {want}, found {have}", arg.span)
                expr._builtin = name
                return result
            return self.err(f"Graph has no method {name!r}", expr.span)
        if obj_type == UPDATES:
            if name == "currentBatch":
                if expr.args or expr.kwargs:
                    self.err("currentBatch takes no arguments", expr.span)
                expr._builtin = name
                return BATCH
            return self.err(f"updates has no method {name!r}", expr.span)
        return self.err(f"{obj_type} has no method {name!r}", expr.span)

    def _call(self, expr: ast.CallExpr, elem_deref) -> Type:
        fn = self.program.function(expr.name)
        if fn is None:
            for a in expr.args:
                self.check_expr(a, elem_deref=elem_deref)
            return self.err(f"unknown function {expr.name!r}", expr.span)
        expr._target = fn
        param_types = [resolve_type(p.type) for p in fn.params]
        if len(expr.args) != len(param_types):
            self.err(
                f"{expr.name} expects {len(param_types)} argument(s), got {len(expr.args)}",
                expr.span,
            )
        for arg, want in zip(expr.args, param_types):
            have = self.check_expr(arg, expected=want, elem_deref=elem_deref)
            if want.name in ("propNode", "propEdge", "Graph", "updates"):
                if have != want and have != ERROR:
                    self.err(f"argument must be {want}, found {have}", arg.span)
            elif not _assignable(want, have):
                self.err(f"argument must be {want}, found {have}", arg.span)
        checked = self.ensure_checked(fn)
        return checked.return_type


def typecheck(program: ast.Program) -> CheckResult:
    return TypeChecker(program).check()

"""OpenMP C++ emitter.

Walks the checked, access-analyzed AST and produces one self-contained
translation unit per program: the DSL functions, a main() that binds the
driver's parameters to command-line flags, and an include of the bundled
support header (graphdyn_rt.h, shipped verbatim next to the output).

Lowering map:
  outer forall / OnAdd / OnDelete  ->  omp parallel for (+ reduction clauses)
  Min / Max                        ->  compare-exchange retry on the guard cell
  flagged plain stores             ->  gd::atomic_store
  flagged property reductions      ->  gd::atomic_add
  fixedPoint until (f: !prop)      ->  while loop over gd::any + buffer swap

Anything outside this subset raises CodegenError rather than emitting
silently wrong code.  Output is deterministic for a fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .. import __version__
from ..errors import CodegenError
from ..frontend import analysis as anl
from ..frontend import ast
from ..frontend.typecheck import CheckResult

SUPPORT_HEADER = "graphdyn_rt.h"

_CPP_SCALAR = {
    "int": "int64_t",
    "long": "int64_t",
    "node": "int64_t",
    "float": "double",
    "double": "double",
    "bool": "bool",
}
_CPP_ELEM = {
    "int": "int64_t",
    "long": "int64_t",
    "node": "int64_t",
    "float": "double",
    "double": "double",
    "bool": "uint8_t",  # vector<bool> is not addressable for atomics
}
_EDGE_FIELD = {"source": "source", "destination": "target", "weight": "weight"}


def support_header_text() -> str:
    return resources.files("graphdyn.codegen").joinpath(f"assets/{SUPPORT_HEADER}").read_text()


@dataclass
class EmitPlan:
    """What the emitter decided before writing text."""

    output_name: str
    schedule: str  # "dynamic" | "static"
    loop_pragmas: Dict[int, str] = field(default_factory=dict)  # id(loop) -> pragma
    atomic_lowering: Dict[int, str] = field(default_factory=dict)  # id(stmt) -> kind
    transfer_list: List[str] = field(default_factory=list)  # reserved (host/device)
    needs_reverse: bool = False


def build_emit_plan(
    check: CheckResult,
    summary: anl.AccessSummary,
    *,
    schedule: str = "dynamic",
    output_name: str = "program_omp.cc",
) -> EmitPlan:
    if schedule not in ("dynamic", "static"):
        raise CodegenError(f"unknown schedule {schedule!r}")
    plan = EmitPlan(output_name=output_name, schedule=schedule)
    from ..engine.run import needs_reverse

    plan.needs_reverse = needs_reverse(check.program)
    for loop in summary.loops:
        clauses = []
        reductions = sorted(
            {
                w.target.name
                for w in loop.writes
                if w.kind == anl.REDUCTION and isinstance(w.target, ast.Identifier)
            }
        )
        if reductions:
            clauses.append(f"reduction(+:{','.join(reductions)})")
        pragma = f"#pragma omp parallel for schedule({schedule})"
        if clauses:
            pragma += " " + " ".join(clauses)
        plan.loop_pragmas[id(loop.loop)] = pragma
        for w in loop.writes:
            plan.atomic_lowering[id(w.stmt)] = w.kind
    return plan


class _Emitter:
    def __init__(self, check: CheckResult, summary: anl.AccessSummary, plan: EmitPlan):
        self.check = check
        self.program = check.program
        self.summary = summary
        self.plan = plan
        self.lines: List[str] = []
        self.indent = 0
        self.tmp = 0
        self._elem_stack: List[Tuple[str, str]] = []  # (var name, elem kind)
        self._batch_var: Optional[str] = None
        self._graph_var: str = "g"
        self._write_kind: Dict[int, str] = plan.atomic_lowering

    # -- plumbing ----------------------------------------------------------

    def out(self, text: str = "") -> None:
        self.lines.append(("    " * self.indent + text) if text else "")

    def fresh(self, prefix: str) -> str:
        self.tmp += 1
        return f"_{prefix}{self.tmp}"

    def err(self, message: str, node: ast.AstNode) -> CodegenError:
        return CodegenError(f"{message} (line {node.span[0]})")

    # -- program ------------------------------------------------------------

    def emit_program(self) -> str:
        p = self.plan
        self.out(f"// generated by graphdyn omp backend v{__version__}")
        self.out(f'#include "{SUPPORT_HEADER}"')
        self.out("#include <omp.h>")
        self.out()
        for fn in self.program.functions:
            self.out(self._signature(fn) + ";")
        self.out()
        for fn in self.program.functions:
            self.emit_function(fn)
            self.out()
        self.emit_main()
        return "\n".join(self.lines) + "\n"

    def _cpp_return(self, fn: ast.FunctionDecl) -> str:
        rt = fn._return_type
        if rt.name == "void":
            return "void"
        return _CPP_SCALAR.get(rt.name, "int64_t")

    def _signature(self, fn: ast.FunctionDecl) -> str:
        parts = []
        for p, ptype in zip(fn.params, fn._param_types):
            if ptype.name == "Graph":
                parts.append(f"gd::Graph& {p.name}")
            elif ptype.name == "updates":
                parts.append(f"const gd::UpdateStream& {p.name}")
            elif ptype.name == "propNode":
                parts.append(f"gd::NodeProp<{_CPP_ELEM[ptype.arg.name]}>& {p.name}")
            elif ptype.name == "propEdge":
                parts.append(f"gd::EdgeProp<{_CPP_ELEM[ptype.arg.name]}>& {p.name}")
            else:
                parts.append(f"{_CPP_SCALAR[ptype.name]} {p.name}")
        return f"{self._cpp_return(fn)} {fn.name}({', '.join(parts)})"

    def emit_function(self, fn: ast.FunctionDecl) -> None:
        for p, ptype in zip(fn.params, fn._param_types):
            if ptype.name == "Graph":
                self._graph_var = p.name
        self.out(self._signature(fn) + " {")
        self.indent += 1
        for stmt in fn.body.statements:
            self.emit_stmt(stmt)
        self.indent -= 1
        self.out("}")

    # -- statements -----------------------------------------------------------

    def emit_stmt(self, stmt: ast.Stmt) -> None:
        handler = getattr(self, f"_s_{type(stmt).__name__}", None)
        if handler is None:
            raise self.err(f"cannot lower {type(stmt).__name__} to OpenMP", stmt)
        handler(stmt)

    def _s_BlockStmt(self, stmt: ast.BlockStmt) -> None:
        self.out("{")
        self.indent += 1
        for s in stmt.statements:
            self.emit_stmt(s)
        self.indent -= 1
        self.out("}")

    def _s_Declaration(self, stmt: ast.Declaration) -> None:
        t = stmt.type.name
        if t == "propNode":
            elem = _CPP_ELEM[stmt.type.arg.name]
            self.out(f"gd::NodeProp<{elem}> {stmt.name};")
            self.out(f"{stmt.name}.attach({self._graph_var}.num_nodes(), {_zero(elem)});")
            return
        if t == "propEdge":
            elem = _CPP_ELEM[stmt.type.arg.name]
            self.out(f"gd::EdgeProp<{elem}> {stmt.name};")
            self.out(f"{stmt.name}.attach({self._graph_var}, {_zero(elem)});")
            return
        if t in ("Graph", "updates"):
            raise self.err(f"{t} locals are not lowerable", stmt)
        cpp = _CPP_SCALAR[t]
        init = self.expr(stmt.init) if stmt.init is not None else _zero(cpp)
        self.out(f"{cpp} {stmt.name} = {init};")

    def _s_Assignment(self, stmt: ast.Assignment) -> None:
        kind = self._write_kind.get(id(stmt), anl.PRIVATE)
        lv = self.lvalue(stmt.target)
        value = self.expr(stmt.value)
        if kind == anl.ATOMIC_STORE:
            cast = self._elem_cast(stmt.target)
            self.out(f"gd::atomic_store(&({lv}), {cast}({value}));")
        else:
            self.out(f"{lv} = {value};")

    def _s_ReduceAssign(self, stmt: ast.ReduceAssign) -> None:
        kind = self._write_kind.get(id(stmt), anl.PRIVATE)
        lv = self.lvalue(stmt.target)
        if stmt.op == "++":
            value = "1"
        else:
            value = self.expr(stmt.value)
        scalar_target = isinstance(stmt.target, ast.Identifier)
        if kind == anl.REDUCTION and not scalar_target:
            cast = self._elem_cast(stmt.target)
            sign = "-" if stmt.op == "-=" else ""
            self.out(f"gd::atomic_add(&({lv}), {cast}({sign}({value})));")
            return
        op = {"++": "+=", "+=": "+=", "-=": "-="}[stmt.op]
        self.out(f"{lv} {op} {value};")

    def _s_If(self, stmt: ast.If) -> None:
        self.out(f"if ({self.expr(stmt.cond)}) {{")
        self.indent += 1
        self._emit_nested(stmt.then)
        self.indent -= 1
        if stmt.els is not None:
            self.out("} else {")
            self.indent += 1
            self._emit_nested(stmt.els)
            self.indent -= 1
        self.out("}")

    def _emit_nested(self, stmt: ast.Stmt) -> None:
        if isinstance(stmt, ast.BlockStmt):
            for s in stmt.statements:
                self.emit_stmt(s)
        else:
            self.emit_stmt(stmt)

    def _s_While(self, stmt: ast.While) -> None:
        self.out(f"while ({self.expr(stmt.cond)}) {{")
        self.indent += 1
        self._emit_nested(stmt.body)
        self.indent -= 1
        self.out("}")

    def _s_Return(self, stmt: ast.Return) -> None:
        if stmt.value is None:
            self.out("return;")
        else:
            self.out(f"return {self.expr(stmt.value)};")

    def _s_MinAssign(self, stmt: ast.MinAssign) -> None:
        self._min_max(stmt, "gd::atomic_min")

    def _s_MaxAssign(self, stmt: ast.MaxAssign) -> None:
        self._min_max(stmt, "gd::atomic_max")

    def _min_max(self, stmt, helper: str) -> None:
        guard_lv = self.lvalue(stmt.targets[0])
        guard_cast = self._elem_cast(stmt.targets[0])
        self.out("{")
        self.indent += 1
        vals = []
        for i, v in enumerate(stmt.values):
            name = self.fresh("c")
            self.out(f"auto {name} = {self.expr(v)};")
            vals.append(name)
        self.out(f"if ({helper}(&({guard_lv}), {guard_cast}({vals[0]}))) {{")
        self.indent += 1
        for target, val in list(zip(stmt.targets, vals))[1:]:
            lv = self.lvalue(target)
            cast = self._elem_cast(target)
            if isinstance(target, ast.Identifier):
                self.out(f"{lv} = {val};")
            else:
                self.out(f"gd::atomic_store(&({lv}), {cast}({val}));")
        self.indent -= 1
        self.out("}")
        self.indent -= 1
        self.out("}")

    def _s_ExprStmt(self, stmt: ast.ExprStmt) -> None:
        expr = stmt.expr
        builtin = getattr(expr, "_builtin", None)
        if builtin in ("attachNodeProperty", "attachEdgeProperty"):
            for sym, value in expr._attach:
                if builtin == "attachNodeProperty":
                    self.out(
                        f"{sym.name}.attach({self._graph_var}.num_nodes(), "
                        f"{self._value_for(sym, value)});"
                    )
                else:
                    self.out(
                        f"{sym.name}.attach({self._graph_var}, {self._value_for(sym, value)});"
                    )
            return
        if builtin in ("updateCSRAdd", "updateCSRDel"):
            arg = self._batch_expr(expr.args[0])
            method = "update_add" if builtin == "updateCSRAdd" else "update_del"
            self.out(f"{self._graph_var}.{method}({arg});")
            return
        if builtin == "propagateNodeFlags":
            flag = self.expr(expr.args[0])
            self.out(f"gd::propagate_flags({self._graph_var}, {flag});")
            return
        self.out(f"{self.expr(expr)};")

    def _value_for(self, sym, value: ast.Expr) -> str:
        cast = _CPP_ELEM[sym.type.arg.name]
        return f"({cast})({self.expr(value)})"

    def _batch_expr(self, arg: ast.Expr) -> str:
        if isinstance(arg, ast.MethodCall) and getattr(arg, "_builtin", None) == "currentBatch":
            if self._batch_var is None:
                raise self.err("currentBatch() outside a Batch block", arg)
            return self._batch_var
        raise self.err("updateCSR* expects updateList.currentBatch()", arg)

    # -- loops -----------------------------------------------------------------

    def _s_ForAll(self, stmt: ast.ForAll) -> None:
        parallel = getattr(stmt, "_parallel_effective", False)
        domain = stmt.source
        builtin = getattr(domain, "_builtin", None)
        if builtin == "nodes":
            self._emit_node_loop(stmt, parallel)
        elif builtin in ("neighbors", "nodesTo"):
            self._emit_edge_loop(stmt, builtin, parallel)
        elif builtin == "currentBatch":
            self._emit_record_loop(stmt, None, parallel)
        else:
            raise self.err("cannot lower this iteration domain", domain)

    def _s_OnAdd(self, stmt: ast.OnAdd) -> None:
        self._emit_record_loop(stmt, "adds", getattr(stmt, "_parallel_effective", False))

    def _s_OnDelete(self, stmt: ast.OnDelete) -> None:
        self._emit_record_loop(stmt, "dels", getattr(stmt, "_parallel_effective", False))

    def _pragma_for(self, stmt) -> Optional[str]:
        return self.plan.loop_pragmas.get(id(stmt))

    def _emit_node_loop(self, stmt: ast.ForAll, parallel: bool) -> None:
        v = stmt.var
        if parallel and (pragma := self._pragma_for(stmt)):
            self.out(pragma)
        self.out(f"for (int64_t {v} = 0; {v} < {self._graph_var}.num_nodes(); ++{v}) {{")
        self.indent += 1
        self._emit_filter(stmt, (v, "node"))
        for s in stmt.body.statements:
            self.emit_stmt(s)
        self.indent -= 1
        self.out("}")

    def _emit_edge_loop(self, stmt: ast.ForAll, builtin: str, parallel: bool) -> None:
        origin = self.expr(stmt.source.args[0])
        call = (
            f"{self._graph_var}.neighbors({origin})"
            if builtin == "neighbors"
            else f"{self._graph_var}.in_edges({origin})"
        )
        var = stmt.var
        if parallel:
            dom = self.fresh("dom")
            self.out(f"auto {dom} = gd::collect({call});")
            if pragma := self._pragma_for(stmt):
                self.out(pragma)
            i = self.fresh("i")
            self.out(f"for (int64_t {i} = 0; {i} < (int64_t){dom}.size(); ++{i}) {{")
            self.indent += 1
            self.out(f"gd::Edge {var} = {dom}[{i}];")
        else:
            self.out(f"for (gd::Edge {var} : {call}) {{")
            self.indent += 1
        self._emit_filter(stmt, (var, "edge"))
        for s in stmt.body.statements:
            self.emit_stmt(s)
        self.indent -= 1
        self.out("}")

    def _emit_record_loop(self, stmt, which: Optional[str], parallel: bool) -> None:
        if self._batch_var is None:
            raise self.err("update iteration outside a Batch block", stmt)
        recs = self.fresh("recs")
        if which is None:
            self.out(f"auto {recs} = {self._batch_var}.records;")
        else:
            self.out(f"auto {recs} = {self._batch_var}.{which}();")
        var = stmt.var
        if parallel and (pragma := self._pragma_for(stmt)):
            self.out(pragma)
        i = self.fresh("i")
        self.out(f"for (int64_t {i} = 0; {i} < (int64_t){recs}.size(); ++{i}) {{")
        self.indent += 1
        self.out(f"gd::Edge {var} = gd::as_edge({recs}[{i}]);")
        if isinstance(stmt, ast.ForAll):
            self._emit_filter(stmt, (var, "edge"))
        for s in stmt.body.statements:
            self.emit_stmt(s)
        self.indent -= 1
        self.out("}")

    def _emit_filter(self, stmt: ast.ForAll, elem: Tuple[str, str]) -> None:
        if stmt.filter is None:
            return
        self._elem_stack.append(elem)
        try:
            pred = self.expr(stmt.filter)
        finally:
            self._elem_stack.pop()
        self.out(f"if (!({pred})) continue;")

    def _s_FixedPoint(self, stmt: ast.FixedPoint) -> None:
        pred = self._predicate(stmt.predicate)
        it = self.fresh("fp")
        self.out("{")
        self.indent += 1
        self.out(f"int64_t {it} = 0;")
        self.out(f"const int64_t {it}_cap = 10 * {self._graph_var}.num_nodes();")
        self.out("while (true) {")
        self.indent += 1
        self.out(f"bool {it}_done = {pred};")
        self.out(f"{stmt.flag} = {it}_done;")
        self.out(f"if ({it}_done) break;")
        self.out(f"if ({it} >= {it}_cap) gd::die(\"fixed point diverged\");")
        for s in stmt.body.statements:
            self.emit_stmt(s)
        for base, nxt in stmt._buffer_pairs:
            self.out(f"gd::swap_clear({base.name}, {nxt.name});")
        self.out(f"++{it};")
        self.indent -= 1
        self.out("}")
        self.indent -= 1
        self.out("}")

    def _predicate(self, predicate: ast.Expr) -> str:
        if (
            isinstance(predicate, ast.UnaryOp)
            and predicate.op == "!"
            and isinstance(predicate.operand, ast.Identifier)
            and getattr(predicate.operand, "_binding", ("",))[0] == "prop_elem"
        ):
            return f"!gd::any({predicate.operand.name})"
        elemwise = any(
            getattr(node, "_binding", ("",))[0] in ("prop_elem", "elem_field")
            for node in ast.walk(predicate)
            if isinstance(node, ast.Identifier)
        )
        if elemwise:
            raise self.err("only '!flag' aggregate predicates are lowerable", predicate)
        return self.expr(predicate)

    def _s_Batch(self, stmt: ast.Batch) -> None:
        b = self.fresh("b")
        batch = self.fresh("batch")
        self.out("{")
        self.indent += 1
        self.out(f"int64_t {b}_size = {self.expr(stmt.size)};")
        self.out(f"int64_t {b}_index = 0;")
        self.out(
            f"for (size_t {b} = 0; {b} < {stmt.updates_var}.size(); "
            f"{b} += {b}_size, ++{b}_index) {{"
        )
        self.indent += 1
        self.out(f"gd::UpdateBatch {batch} = {stmt.updates_var}.slice({b}, {b}_size);")
        prev = self._batch_var
        self._batch_var = batch
        for s in stmt.body.statements:
            self.emit_stmt(s)
        self._batch_var = prev
        self.out(f"{self._graph_var}.merge_if_due({b}_index);")
        self.indent -= 1
        self.out("}")
        self.indent -= 1
        self.out("}")

    # -- expressions -----------------------------------------------------------

    def lvalue(self, target: ast.Expr) -> str:
        return self.expr(target)

    def _elem_cast(self, target: ast.Expr) -> str:
        t = getattr(target, "_type", None)
        if t is None:
            return "(int64_t)"
        name = t.name if t.name != "<inf>" else "int"
        return f"({_CPP_ELEM.get(name, 'int64_t')})"

    def expr(self, e: ast.Expr) -> str:
        handler = getattr(self, f"_e_{type(e).__name__}", None)
        if handler is None:
            raise self.err(f"cannot lower expression {type(e).__name__}", e)
        return handler(e)

    def _e_Literal(self, e: ast.Literal) -> str:
        if e.kind == "bool":
            return "true" if e.value else "false"
        if e.kind == "inf":
            return "gd::kInfF64" if getattr(e, "_num_type", "int") == "float" else "gd::kInfI64"
        if e.kind == "float":
            text = repr(float(e.value))
            return text if ("." in text or "e" in text or "inf" in text) else text + ".0"
        return str(e.value)

    def _e_Identifier(self, e: ast.Identifier) -> str:
        kind, payload = e._binding
        if kind == "sym":
            return e.name
        if kind == "prop_elem":
            if not self._elem_stack:
                raise self.err("implicit element read outside a filter", e)
            elem_var, elem_kind = self._elem_stack[-1]
            return f"{e.name}[{elem_var}]"
        elem_var, _ = self._elem_stack[-1] if self._elem_stack else ("_elem", "edge")
        return f"{elem_var}.{_EDGE_FIELD[payload]}"

    def _e_PropertyAccess(self, e: ast.PropertyAccess) -> str:
        kind, payload = e._kind
        obj = self.expr(e.obj)
        if kind == "edge_field":
            return f"{obj}.{_EDGE_FIELD[payload]}"
        return f"{payload.name}[{obj}]"

    def _e_IndexAccess(self, e: ast.IndexAccess) -> str:
        return f"{self.expr(e.obj)}[{self.expr(e.index)}]"

    def _e_UnaryOp(self, e: ast.UnaryOp) -> str:
        return f"{e.op}({self.expr(e.operand)})"

    def _e_BinaryOp(self, e: ast.BinaryOp) -> str:
        t = getattr(e, "_type", None)
        is_int = t is not None and t.name in ("int", "long", "node", "<inf>")
        left, right = self.expr(e.left), self.expr(e.right)
        if e.op == "+" and is_int:
            return f"gd::sat_add({left}, {right})"
        if e.op == "-" and is_int:
            return f"gd::sat_sub({left}, {right})"
        return f"({left} {e.op} {right})"

    def _e_MethodCall(self, e: ast.MethodCall) -> str:
        builtin = getattr(e, "_builtin", None)
        if builtin == "num_nodes":
            return f"{self._graph_var}.num_nodes()"
        raise self.err(f"method {e.name!r} has no lowerable value form", e)

    def _e_CallExpr(self, e: ast.CallExpr) -> str:
        args = ", ".join(self.expr(a) for a in e.args)
        return f"{e.name}({args})"

    # -- main -------------------------------------------------------------------

    def emit_main(self) -> None:
        entry = None
        if self.program.entry is not None:
            entry = self.program.function(self.program.entry)
        else:
            static = self.program.by_role("Static")
            entry = static[0] if static else None
        if entry is None:
            return
        self.out("int main(int argc, char** argv) {")
        self.indent += 1
        self.out("gd::Args args(argc, argv);")
        self.out("omp_set_num_threads((int)args.geti(\"--threads\", 1));")
        reverse = "true" if self.plan.needs_reverse else "false"
        self.out(
            "gd::Graph _g = gd::Graph::load(args.get(\"--graph\"), !args.has(\"--undirected\"), "
            f"{reverse}, args.geti(\"--merge-interval\", 1));"
        )
        call_args = []
        prop_params = []
        has_updates = any(t.name == "updates" for t in entry._param_types)
        for p, ptype in zip(entry.params, entry._param_types):
            if ptype.name == "Graph":
                call_args.append("_g")
            elif ptype.name == "updates":
                self.out(
                    f"gd::UpdateStream {p.name} = gd::UpdateStream::load(args.get(\"--updates\"));"
                )
                call_args.append(p.name)
            elif ptype.name == "propNode":
                elem = _CPP_ELEM[ptype.arg.name]
                self.out(f"gd::NodeProp<{elem}> {p.name};")
                self.out(f"{p.name}.attach(_g.num_nodes(), {_zero(elem)});")
                prop_params.append(p.name)
                call_args.append(p.name)
            elif ptype.name == "propEdge":
                elem = _CPP_ELEM[ptype.arg.name]
                self.out(f"gd::EdgeProp<{elem}> {p.name};")
                self.out(f"{p.name}.attach(_g, {_zero(elem)});")
                call_args.append(p.name)
            else:
                default = {
                    "damping": "args.getf(\"--damping\", 0.85)",
                    "beta": "args.getf(\"--beta\", 0.001)",
                    "maxiter": "args.geti(\"--maxiter\", 100)",
                }.get(p.name)
                if default is None:
                    if ptype.name in ("float", "double"):
                        default = f"args.getf(\"--{p.name}\", 0.0)"
                    elif p.name in ("batchsize", "batch_size") and has_updates:
                        default = f"args.geti(\"--{p.name}\", 0)"
                    else:
                        default = f"args.geti(\"--{p.name}\", 0)"
                cpp = _CPP_SCALAR[ptype.name]
                self.out(f"{cpp} {p.name} = ({cpp}){default};")
                if p.name in ("batchsize", "batch_size") and has_updates:
                    upd = next(
                        q.name for q, t in zip(entry.params, entry._param_types)
                        if t.name == "updates"
                    )
                    self.out(f"if ({p.name} <= 0) {p.name} = (int64_t){upd}.size();")
                call_args.append(p.name)
        ret = self._cpp_return(entry)
        self.out("double _t0 = omp_get_wtime();")
        if ret == "void":
            self.out(f"{entry.name}({', '.join(call_args)});")
        else:
            self.out(f"{ret} _result = {entry.name}({', '.join(call_args)});")
        self.out("double _t1 = omp_get_wtime();")
        self.out("std::string _out = args.get(\"--out\", \".\");")
        for name in prop_params:
            self.out(f"gd::dump_prop(_out + \"/{name}.csv\", {name});")
        self.out("std::vector<std::pair<std::string, std::string>> _scalars;")
        if ret == "double":
            self.out("{ char b[64]; std::snprintf(b, sizeof b, \"%.17g\", _result);")
            self.out("  _scalars.emplace_back(\"return\", b); }")
        elif ret != "void":
            self.out("_scalars.emplace_back(\"return\", std::to_string((long long)_result));")
        self.out("{ char b[64]; std::snprintf(b, sizeof b, \"%.6f\", _t1 - _t0);")
        self.out("  _scalars.emplace_back(\"elapsed_seconds\", b); }")
        self.out("gd::dump_scalars(_out + \"/scalars.csv\", _scalars);")
        self.out("return 0;")
        self.indent -= 1
        self.out("}")


def emit_openmp(
    check: CheckResult,
    summary: Optional[anl.AccessSummary] = None,
    *,
    schedule: str = "dynamic",
    output_name: str = "program_omp.cc",
) -> str:
    """Deterministic OpenMP C++ source for a checked program."""
    if summary is None:
        summary = anl.analyze_access(check.program)
    plan = build_emit_plan(check, summary, schedule=schedule, output_name=output_name)
    return _Emitter(check, summary, plan).emit_program()


def _zero(cpp_type: str) -> str:
    return "0.0" if cpp_type == "double" else ("false" if cpp_type == "bool" else "0")

"""Canonical source renderer; parse(pretty_print(parse(s))) == parse(s)."""

from __future__ import annotations

from typing import List

from . import ast

_PRECEDENCE = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6, "%": 6,
}


def _expr(e: ast.Expr, parent_prec: int = 0) -> str:
    if isinstance(e, ast.Literal):
        if e.kind == "bool":
            return "True" if e.value else "False"
        if e.kind == "inf":
            return "INF"
        if e.kind == "float":
            text = repr(float(e.value))
            return text
        return str(e.value)
    if isinstance(e, ast.Identifier):
        return e.name
    if isinstance(e, ast.PropertyAccess):
        return f"{_expr(e.obj, 99)}.{e.name}"
    if isinstance(e, ast.IndexAccess):
        return f"{_expr(e.obj, 99)}[{_expr(e.index)}]"
    if isinstance(e, ast.MethodCall):
        parts = [_expr(a) for a in e.args]
        parts += [f"{k} = {_expr(v)}" for k, v in e.kwargs]
        return f"{_expr(e.obj, 99)}.{e.name}({', '.join(parts)})"
    if isinstance(e, ast.CallExpr):
        return f"{e.name}({', '.join(_expr(a) for a in e.args)})"
    if isinstance(e, ast.UnaryOp):
        return f"{e.op}{_expr(e.operand, 98)}"
    if isinstance(e, ast.BinaryOp):
        prec = _PRECEDENCE[e.op]
        text = f"{_expr(e.left, prec)} {e.op} {_expr(e.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"cannot print {type(e).__name__}")


def _type(t: ast.TypeRef) -> str:
    return f"{t.name}<{_type(t.arg)}>" if t.arg is not None else t.name


class _Printer:
    def __init__(self):
        self.lines: List[str] = []
        self.indent = 0

    def emit(self, text: str) -> None:
        self.lines.append("    " * self.indent + text)

    def block(self, block: ast.BlockStmt, header: str) -> None:
        self.emit(header + " {")
        self.indent += 1
        for stmt in block.statements:
            self.stmt(stmt)
        self.indent -= 1
        self.emit("}")

    def stmt(self, s: ast.Stmt) -> None:
        if isinstance(s, ast.BlockStmt):
            self.block(s, "")
        elif isinstance(s, ast.Declaration):
            init = f" = {_expr(s.init)}" if s.init is not None else ""
            self.emit(f"{_type(s.type)} {s.name}{init};")
        elif isinstance(s, ast.Assignment):
            self.emit(f"{_expr(s.target)} = {_expr(s.value)};")
        elif isinstance(s, ast.ReduceAssign):
            if s.op == "++":
                self.emit(f"{_expr(s.target)}++;")
            else:
                self.emit(f"{_expr(s.target)} {s.op} {_expr(s.value)};")
        elif isinstance(s, ast.If):
            self.emit(f"if ({_expr(s.cond)})")
            self._nested(s.then)
            if s.els is not None:
                self.emit("else")
                self._nested(s.els)
        elif isinstance(s, ast.While):
            self.emit(f"while ({_expr(s.cond)})")
            self._nested(s.body)
        elif isinstance(s, ast.ForAll):
            kw = "forall" if s.parallel else "for"
            source = _expr(s.source, 99)
            if s.filter is not None:
                source = f"{source}.filter({_expr(s.filter)})"
            self.block(s.body, f"{kw} ({s.var} in {source})")
        elif isinstance(s, ast.FixedPoint):
            self.block(s.body, f"fixedPoint until ({s.flag}: {_expr(s.predicate)})")
        elif isinstance(s, ast.Batch):
            self.block(s.body, f"Batch ({s.updates_var}: {_expr(s.size)})")
        elif isinstance(s, ast.OnAdd):
            self.block(s.body, f"OnAdd ({s.var} in {_expr(s.source)})")
        elif isinstance(s, ast.OnDelete):
            self.block(s.body, f"OnDelete ({s.var} in {_expr(s.source)})")
        elif isinstance(s, ast.MinAssign):
            self._min_max("Min", s.targets, s.values)
        elif isinstance(s, ast.MaxAssign):
            self._min_max("Max", s.targets, s.values)
        elif isinstance(s, ast.ExprStmt):
            self.emit(f"{_expr(s.expr)};")
        elif isinstance(s, ast.Return):
            self.emit(f"return {_expr(s.value)};" if s.value is not None else "return;")
        else:
            raise TypeError(f"cannot print {type(s).__name__}")

    def _nested(self, s: ast.Stmt) -> None:
        if isinstance(s, ast.BlockStmt):
            self.block(s, "")
        else:
            self.indent += 1
            self.stmt(s)
            self.indent -= 1

    def _min_max(self, kw: str, targets, values) -> None:
        t = ", ".join(_expr(x) for x in targets)
        v = ", ".join(_expr(x) for x in values)
        self.emit(f"{kw}({t} ; {v});")


def pretty_print(program: ast.Program) -> str:
    p = _Printer()
    for fn in program.functions:
        params = ", ".join(f"{_type(x.type)} {x.name}" for x in fn.params)
        p.block(fn.body, f"{fn.role} {fn.name}({params})")
        p.emit("")
    return "\n".join(p.lines)

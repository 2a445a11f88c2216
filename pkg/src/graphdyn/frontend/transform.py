"""Semantics-preserving AST cleanups: dead local-write elimination."""

from __future__ import annotations

from dataclasses import replace
from typing import List, Set

from . import ast


def _pure(expr: ast.Expr) -> bool:
    """Side-effect-free expressions; calls are never assumed pure."""
    if isinstance(expr, (ast.Literal, ast.Identifier)):
        return True
    if isinstance(expr, ast.UnaryOp):
        return _pure(expr.operand)
    if isinstance(expr, ast.BinaryOp):
        return _pure(expr.left) and _pure(expr.right)
    if isinstance(expr, ast.PropertyAccess):
        return _pure(expr.obj)
    if isinstance(expr, ast.IndexAccess):
        return _pure(expr.obj) and _pure(expr.index)
    return False


def _reads_of_function(fn: ast.FunctionDecl) -> Set[str]:
    """Every identifier consulted somewhere other than as a plain store target."""
    reads: Set[str] = set()

    def visit(node: object) -> None:
        if isinstance(node, ast.Assignment):
            # the target identifier itself is not a read; its subexpressions are
            if isinstance(node.target, ast.Identifier):
                visit(node.value)
                return
        if isinstance(node, ast.Identifier):
            reads.add(node.name)
            return
        if isinstance(node, ast.PropertyAccess):
            reads.add(node.name)
        if isinstance(node, ast.AstNode):
            from dataclasses import fields

            for f in fields(node):
                if f.name == "span":
                    continue
                visit(getattr(node, f.name))
        elif isinstance(node, (list, tuple)):
            for item in node:
                visit(item)

    visit(fn.body)
    # loop variables and convergence flags count as used
    for node in ast.walk(fn.body):
        if isinstance(node, (ast.ForAll, ast.OnAdd, ast.OnDelete)):
            reads.add(node.var)
        elif isinstance(node, ast.FixedPoint):
            reads.add(node.flag)
        elif isinstance(node, ast.Batch):
            reads.add(node.updates_var)
        elif isinstance(node, ast.MethodCall):
            for name, _ in node.kwargs:
                reads.add(name)  # attached property names stay live
    return reads


def _strip_block(block: ast.BlockStmt, dead: Set[str]) -> ast.BlockStmt:
    out: List[ast.Stmt] = []
    for stmt in block.statements:
        if isinstance(stmt, ast.Declaration):
            if stmt.name in dead and (stmt.init is None or _pure(stmt.init)):
                continue
        if isinstance(stmt, ast.Assignment):
            if (
                isinstance(stmt.target, ast.Identifier)
                and stmt.target.name in dead
                and _pure(stmt.value)
            ):
                continue
        out.append(_strip_stmt(stmt, dead))
    return replace(block, statements=out)


def _strip_stmt(stmt: ast.Stmt, dead: Set[str]) -> ast.Stmt:
    if isinstance(stmt, ast.BlockStmt):
        return _strip_block(stmt, dead)
    for attr in ("body", "then", "els"):
        child = getattr(stmt, attr, None)
        if isinstance(child, ast.BlockStmt):
            stmt = replace(stmt, **{attr: _strip_block(child, dead)})
        elif isinstance(child, ast.Stmt):
            stmt = replace(stmt, **{attr: _strip_stmt(child, dead)})
    return stmt


def strip_dead_code(program: ast.Program) -> ast.Program:
    """Remove stores to local variables that are never read.

    Only locals with side-effect-free right-hand sides are touched; node and
    edge properties are never removed.  Runs to a fixpoint, since removing
    one dead store can orphan another local.
    """
    functions = []
    for fn in program.functions:
        body = fn.body
        while True:
            reads = _reads_of_function(replace(fn, body=body))
            declared = {
                s.name
                for s in ast.walk(body)
                if isinstance(s, ast.Declaration)
                and s.type.name not in ("propNode", "propEdge", "Graph", "updates")
            }
            dead = declared - reads
            if not dead:
                break
            new_body = _strip_block(body, dead)
            if ast.ast_equal(new_body, body):
                break
            body = new_body
        functions.append(replace(fn, body=body))
    return replace(program, functions=functions)

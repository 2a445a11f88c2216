"""Typed AST for the dynamic-graph DSL.

Every node carries a source span; `ast_equal` compares trees structurally,
ignoring spans, for round-trip tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import List, Optional, Tuple

from .diagnostics import Span


@dataclass
class AstNode:
    span: Span


# -- types -------------------------------------------------------------------


@dataclass
class TypeRef(AstNode):
    name: str  # int, bool, long, float, double, node, edge, Graph, updates, propNode, propEdge
    arg: Optional["TypeRef"] = None  # element type of propNode<T> / propEdge<T>

    def __str__(self) -> str:
        return f"{self.name}<{self.arg}>" if self.arg is not None else self.name


# -- expressions ---------------------------------------------------------------


@dataclass
class Expr(AstNode):
    pass


@dataclass
class Literal(Expr):
    value: object  # int | float | bool | the string "INF"
    kind: str  # "int" | "float" | "bool" | "inf"


@dataclass
class Identifier(Expr):
    name: str


@dataclass
class PropertyAccess(Expr):
    obj: Expr
    name: str


@dataclass
class IndexAccess(Expr):
    obj: Expr
    index: Expr


@dataclass
class MethodCall(Expr):
    obj: Expr
    name: str
    args: List[Expr]
    kwargs: List[Tuple[str, Expr]] = field(default_factory=list)


@dataclass
class CallExpr(Expr):
    name: str
    args: List[Expr]


@dataclass
class UnaryOp(Expr):
    op: str  # "!" | "-"
    operand: Expr


@dataclass
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr


# -- statements ----------------------------------------------------------------


@dataclass
class Stmt(AstNode):
    pass


@dataclass
class BlockStmt(Stmt):
    statements: List[Stmt]


@dataclass
class Declaration(Stmt):
    type: TypeRef
    name: str
    init: Optional[Expr]


@dataclass
class Assignment(Stmt):
    target: Expr
    value: Expr


@dataclass
class ReduceAssign(Stmt):
    """Compound assignment conveying a reduction: +=, -=, or ++."""

    target: Expr
    op: str  # "+=" | "-=" | "++"
    value: Optional[Expr]  # None for ++


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    els: Optional[Stmt]


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class ForAll(Stmt):
    var: str
    source: Expr
    filter: Optional[Expr]
    body: BlockStmt
    parallel: bool = True  # sequential `for` sets this False; analysis may demote


@dataclass
class FixedPoint(Stmt):
    flag: str
    predicate: Expr
    body: BlockStmt


@dataclass
class Batch(Stmt):
    updates_var: str
    size: Expr
    body: BlockStmt


@dataclass
class OnAdd(Stmt):
    var: str
    source: Expr
    body: BlockStmt


@dataclass
class OnDelete(Stmt):
    var: str
    source: Expr
    body: BlockStmt


@dataclass
class MinAssign(Stmt):
    targets: List[Expr]
    values: List[Expr]


@dataclass
class MaxAssign(Stmt):
    targets: List[Expr]
    values: List[Expr]


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class Return(Stmt):
    value: Optional[Expr]


# -- declarations ----------------------------------------------------------------


@dataclass
class Param(AstNode):
    type: TypeRef
    name: str


@dataclass
class FunctionDecl(AstNode):
    role: str  # function | Dynamic | Static | Incremental | Decremental
    name: str
    params: List[Param]
    body: BlockStmt


@dataclass
class Program(AstNode):
    functions: List[FunctionDecl]

    @property
    def entry(self) -> Optional[str]:
        """Name of the Dynamic driver function, when the program has one."""
        for fn in self.functions:
            if fn.role == "Dynamic":
                return fn.name
        return None

    def function(self, name: str) -> Optional[FunctionDecl]:
        for fn in self.functions:
            if fn.name == name:
                return fn
        return None

    def by_role(self, role: str) -> List[FunctionDecl]:
        return [fn for fn in self.functions if fn.role == role]


def ast_equal(a: object, b: object) -> bool:
    """Structural equality that ignores source spans."""
    if type(a) is not type(b):
        return False
    if isinstance(a, AstNode):
        for f in fields(a):
            if f.name in ("span", "parallel"):
                continue
            if not ast_equal(getattr(a, f.name), getattr(b, f.name)):
                return False
        return True
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(ast_equal(x, y) for x, y in zip(a, b))
    return a == b


def walk(node: object):
    """Yield every AstNode in the tree rooted at `node` (pre-order)."""
    if isinstance(node, AstNode):
        yield node
        for f in fields(node):
            if f.name == "span":
                continue
            yield from walk(getattr(node, f.name))
    elif isinstance(node, (list, tuple)):
        for item in node:
            yield from walk(item)

"""Semantic types and the scoped symbol table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

from .ast import TypeRef
from .diagnostics import Span


@dataclass(frozen=True)
class Type:
    name: str
    arg: Optional["Type"] = None

    def __str__(self) -> str:
        return f"{self.name}<{self.arg}>" if self.arg else self.name


INT = Type("int")
BOOL = Type("bool")
LONG = Type("long")
FLOAT = Type("float")
DOUBLE = Type("double")
NODE = Type("node")
EDGE = Type("edge")
GRAPH = Type("Graph")
UPDATES = Type("updates")
VOID = Type("void")
ERROR = Type("<error>")  # poisoned type: suppresses cascading diagnostics


def prop_node(elem: Type) -> Type:
    return Type("propNode", elem)


def prop_edge(elem: Type) -> Type:
    return Type("propEdge", elem)


def iter_of(elem: Type) -> Type:
    return Type("iter", elem)


NUMERIC = (INT, LONG, FLOAT, DOUBLE)
# node ids are plain integers; they mix freely with int arithmetic
INT_LIKE = (INT, LONG, NODE)
PRIMITIVES = {"int": INT, "bool": BOOL, "long": LONG, "float": FLOAT, "double": DOUBLE,
              "node": NODE, "edge": EDGE, "Graph": GRAPH, "updates": UPDATES}


def resolve_type(ref: TypeRef) -> Type:
    if ref.name in ("propNode", "propEdge"):
        elem = resolve_type(ref.arg) if ref.arg is not None else ERROR
        return Type(ref.name, elem)
    return PRIMITIVES.get(ref.name, ERROR)


def is_numeric(t: Type) -> bool:
    return t in NUMERIC or t == NODE


def is_assignable(target: Type, value: Type) -> bool:
    """Widening numeric conversions only; node and integer types interconvert."""
    if ERROR in (target, value):
        return True
    if target == value:
        return True
    if target in INT_LIKE and value in INT_LIKE:
        return True
    if target == LONG and value == INT:
        return True
    if target in (FLOAT, DOUBLE) and (value in INT_LIKE or value in (FLOAT, DOUBLE)):
        # float -> double and double -> float both allowed (single float kind at runtime)
        return True
    return False


def join_numeric(a: Type, b: Type) -> Optional[Type]:
    if not (is_numeric(a) and is_numeric(b)):
        return None
    order = {NODE: 0, INT: 0, LONG: 1, FLOAT: 2, DOUBLE: 3}
    na, nb = order[a], order[b]
    winner = a if na >= nb else b
    return INT if winner == NODE else winner


@dataclass(eq=False)  # identity semantics: runtime frames key on the symbol object
class Symbol:
    name: str
    type: Type
    mutable: bool
    decl_span: Span
    is_param: bool = False


class SymbolTable:
    """Scoped name -> (type, mutability, declaration site) bindings."""

    def __init__(self):
        self.scopes: List[Dict[str, Symbol]] = [{}]
        # flat record of every binding ever made, for tooling and tests
        self.all_bindings: List[Symbol] = []

    def push(self) -> None:
        self.scopes.append({})

    def pop(self) -> None:
        self.scopes.pop()

    def declare(self, sym: Symbol) -> bool:
        """False when the name is already bound in the innermost scope."""
        if sym.name in self.scopes[-1]:
            return False
        self.scopes[-1][sym.name] = sym
        self.all_bindings.append(sym)
        return True

    def lookup(self, name: str) -> Optional[Symbol]:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

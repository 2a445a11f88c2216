"""Recursive-descent parser with statement-level error recovery.

Malformed input never raises past `parse`: syntax problems become
diagnostics with spans and expected-token sets, and parsing resynchronizes
on `;` and `}`.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from . import ast
from .diagnostics import Diagnostic, error
from .tokens import Token, tokenize

FUNCTION_ROLES = ("function", "Dynamic", "Static", "Incremental", "Decremental")
TYPE_NAMES = (
    "int", "bool", "long", "float", "double",
    "node", "edge", "Graph", "propNode", "propEdge", "updates",
)
MAX_EXPR_DEPTH = 200  # fuzz guard: malformed deeply-nested input must not blow the stack


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: List[Diagnostic] = []
        self._depth = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, *types: str) -> bool:
        return self.cur.type in types

    def advance(self) -> Token:
        tok = self.cur
        if tok.type != "eof":
            self.pos += 1
        return tok

    def expect(self, type_: str) -> Token:
        if self.cur.type == type_:
            return self.advance()
        raise _SyntaxError(
            error(f"unexpected {describe(self.cur)}", self.cur.span, expected=(type_,))
        )

    def fail(self, message: str, expected: Tuple[str, ...] = ()):
        raise _SyntaxError(error(message, self.cur.span, expected=expected))

    def resync_to_statement_boundary(self) -> None:
        depth = 0
        while not self.at("eof"):
            t = self.cur.type
            if t == "{":
                depth += 1
            elif t == "}":
                if depth == 0:
                    return  # let the enclosing block consume it
                depth -= 1
            elif t == ";" and depth == 0:
                self.advance()
                return
            self.advance()

    # -- program structure --------------------------------------------------

    def parse_program(self) -> ast.Program:
        functions: List[ast.FunctionDecl] = []
        start = self.cur.span
        while not self.at("eof"):
            try:
                functions.append(self.parse_function())
            except _SyntaxError as exc:
                self.diagnostics.append(exc.diagnostic)
                # skip to the next plausible function start
                while not self.at("eof") and not self.at(*FUNCTION_ROLES):
                    self.advance()
        return ast.Program(start, functions)

    def parse_function(self) -> ast.FunctionDecl:
        if not self.at(*FUNCTION_ROLES):
            self.fail(f"unexpected {describe(self.cur)}", expected=FUNCTION_ROLES)
        role_tok = self.advance()
        name = self.expect("ident")
        self.expect("(")
        params: List[ast.Param] = []
        if not self.at(")"):
            while True:
                ptype = self.parse_type()
                pname = self.expect("ident")
                params.append(ast.Param(ptype.span, ptype, pname.text))
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        body = self.parse_block()
        return ast.FunctionDecl(role_tok.span, role_tok.type, name.text, params, body)

    def parse_type(self) -> ast.TypeRef:
        if not self.at(*TYPE_NAMES):
            self.fail(f"expected a type, found {describe(self.cur)}", expected=TYPE_NAMES)
        tok = self.advance()
        arg = None
        if tok.type in ("propNode", "propEdge"):
            self.expect("<")
            arg = self.parse_type()
            self.expect(">")
        return ast.TypeRef(tok.span, tok.type, arg)

    # -- statements -----------------------------------------------------------

    def parse_block(self) -> ast.BlockStmt:
        open_tok = self.expect("{")
        statements: List[ast.Stmt] = []
        while not self.at("}", "eof"):
            try:
                statements.append(self.parse_statement())
            except _SyntaxError as exc:
                self.diagnostics.append(exc.diagnostic)
                self.resync_to_statement_boundary()
        self.expect("}")
        return ast.BlockStmt(open_tok.span, statements)

    def parse_statement(self) -> ast.Stmt:
        t = self.cur.type
        if t == "{":
            return self.parse_block()
        if t in TYPE_NAMES:
            return self.parse_declaration()
        if t == "if":
            return self.parse_if()
        if t == "while":
            return self.parse_while()
        if t in ("forall", "for"):
            return self.parse_forall(parallel=t == "forall")
        if t == "fixedPoint":
            return self.parse_fixed_point()
        if t == "Batch":
            return self.parse_batch()
        if t in ("OnAdd", "OnDelete"):
            return self.parse_on_update(t)
        if t in ("Min", "Max"):
            return self.parse_min_max(t)
        if t == "return":
            tok = self.advance()
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return ast.Return(tok.span, value)
        return self.parse_assign_or_call()

    def parse_declaration(self) -> ast.Declaration:
        dtype = self.parse_type()
        name = self.expect("ident")
        init = None
        if self.at("="):
            self.advance()
            init = self.parse_expr()
        self.expect(";")
        return ast.Declaration(dtype.span, dtype, name.text, init)

    def parse_if(self) -> ast.If:
        tok = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_statement()
        els = None
        if self.at("else"):
            self.advance()
            els = self.parse_statement()
        return ast.If(tok.span, cond, then, els)

    def parse_while(self) -> ast.While:
        tok = self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body = self.parse_statement()
        return ast.While(tok.span, cond, body)

    def parse_forall(self, parallel: bool) -> ast.ForAll:
        tok = self.advance()  # forall | for
        self.expect("(")
        var = self.expect("ident")
        self.expect("in")
        source, filter_expr = self.parse_iter_source()
        self.expect(")")
        body = self.parse_block()
        return ast.ForAll(tok.span, var.text, source, filter_expr, body, parallel=parallel)

    def parse_iter_source(self) -> Tuple[ast.Expr, Optional[ast.Expr]]:
        expr = self.parse_expr()
        # `.filter(pred)` is the one iterator adapter; peel it off the chain
        if isinstance(expr, ast.MethodCall) and expr.name == "filter":
            if len(expr.args) != 1 or expr.kwargs:
                raise _SyntaxError(error("filter takes exactly one predicate", expr.span))
            return expr.obj, expr.args[0]
        return expr, None

    def parse_fixed_point(self) -> ast.FixedPoint:
        tok = self.expect("fixedPoint")
        self.expect("until")
        self.expect("(")
        flag = self.expect("ident")
        self.expect(":")
        predicate = self.parse_expr()
        self.expect(")")
        body = self.parse_block()
        return ast.FixedPoint(tok.span, flag.text, predicate, body)

    def parse_batch(self) -> ast.Batch:
        tok = self.expect("Batch")
        self.expect("(")
        var = self.expect("ident")
        self.expect(":")
        size = self.parse_expr()
        self.expect(")")
        body = self.parse_block()
        return ast.Batch(tok.span, var.text, size, body)

    def parse_on_update(self, keyword: str) -> ast.Stmt:
        tok = self.expect(keyword)
        self.expect("(")
        var = self.expect("ident")
        self.expect("in")
        source = self.parse_expr()
        self.expect(")")
        body = self.parse_block()
        cls = ast.OnAdd if keyword == "OnAdd" else ast.OnDelete
        return cls(tok.span, var.text, source, body)

    def parse_min_max(self, keyword: str) -> ast.Stmt:
        tok = self.expect(keyword)
        self.expect("(")
        targets = [self.parse_expr()]
        while self.at(","):
            self.advance()
            targets.append(self.parse_expr())
        self.expect(";")
        values = [self.parse_expr()]
        while self.at(","):
            self.advance()
            values.append(self.parse_expr())
        self.expect(")")
        self.expect(";")
        for target in targets:
            self._require_lvalue(target)
        if len(targets) != len(values):
            raise _SyntaxError(
                error(f"{keyword} needs as many values as targets", tok.span)
            )
        cls = ast.MinAssign if keyword == "Min" else ast.MaxAssign
        return cls(tok.span, targets, values)

    def _require_lvalue(self, expr: ast.Expr) -> None:
        if not isinstance(expr, (ast.Identifier, ast.PropertyAccess, ast.IndexAccess)):
            raise _SyntaxError(error("not an assignable location", expr.span))

    def parse_assign_or_call(self) -> ast.Stmt:
        expr = self.parse_expr()
        if self.at("="):
            self._require_lvalue(expr)
            self.advance()
            value = self.parse_expr()
            self.expect(";")
            return ast.Assignment(expr.span, expr, value)
        if self.at("+=", "-="):
            self._require_lvalue(expr)
            op = self.advance().type
            value = self.parse_expr()
            self.expect(";")
            return ast.ReduceAssign(expr.span, expr, op, value)
        if self.at("++"):
            self._require_lvalue(expr)
            self.advance()
            self.expect(";")
            return ast.ReduceAssign(expr.span, expr, "++", None)
        if isinstance(expr, (ast.MethodCall, ast.CallExpr)):
            self.expect(";")
            return ast.ExprStmt(expr.span, expr)
        self.fail("expression is not a statement", expected=("=", "+=", "-=", "++", ";"))

    # -- expressions -----------------------------------------------------------
    # precedence: || < && < == != < relational < + - < * / % < unary < postfix

    def parse_expr(self) -> ast.Expr:
        self._depth += 1
        try:
            if self._depth > MAX_EXPR_DEPTH:
                self.fail("expression nesting too deep")
            return self.parse_or()
        finally:
            self._depth -= 1

    def _binary(self, sub, ops) -> ast.Expr:
        left = sub()
        while self.at(*ops):
            op = self.advance()
            right = sub()
            left = ast.BinaryOp(op.span, op.type, left, right)
        return left

    def parse_or(self) -> ast.Expr:
        return self._binary(self.parse_and, ("||",))

    def parse_and(self) -> ast.Expr:
        return self._binary(self.parse_equality, ("&&",))

    def parse_equality(self) -> ast.Expr:
        return self._binary(self.parse_relational, ("==", "!="))

    def parse_relational(self) -> ast.Expr:
        return self._binary(self.parse_additive, ("<", "<=", ">", ">="))

    def parse_additive(self) -> ast.Expr:
        return self._binary(self.parse_multiplicative, ("+", "-"))

    def parse_multiplicative(self) -> ast.Expr:
        return self._binary(self.parse_unary, ("*", "/", "%"))

    def parse_unary(self) -> ast.Expr:
        if self.at("!", "-"):
            op = self.advance()
            operand = self.parse_unary()
            return ast.UnaryOp(op.span, op.type, operand)
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Expr:
        self._depth += 1
        try:
            if self._depth > MAX_EXPR_DEPTH:
                self.fail("expression nesting too deep")
            expr = self.parse_primary()
            while True:
                if self.at("."):
                    self.advance()
                    name = self.expect("ident")
                    if self.at("("):
                        args, kwargs = self.parse_call_args()
                        expr = ast.MethodCall(name.span, expr, name.text, args, kwargs)
                    else:
                        expr = ast.PropertyAccess(name.span, expr, name.text)
                elif self.at("["):
                    tok = self.advance()
                    index = self.parse_expr()
                    self.expect("]")
                    expr = ast.IndexAccess(tok.span, expr, index)
                else:
                    return expr
        finally:
            self._depth -= 1

    def parse_call_args(self) -> Tuple[List[ast.Expr], List[Tuple[str, ast.Expr]]]:
        self.expect("(")
        args: List[ast.Expr] = []
        kwargs: List[Tuple[str, ast.Expr]] = []
        if not self.at(")"):
            while True:
                if self.at("ident") and self.peek().type == "=":
                    name = self.advance()
                    self.advance()  # '='
                    kwargs.append((name.text, self.parse_expr()))
                else:
                    if kwargs:
                        self.fail("positional argument after named argument")
                    args.append(self.parse_expr())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return args, kwargs

    def parse_primary(self) -> ast.Expr:
        tok = self.cur
        if tok.type == "intlit":
            self.advance()
            return ast.Literal(tok.span, int(tok.text), "int")
        if tok.type == "floatlit":
            self.advance()
            return ast.Literal(tok.span, float(tok.text), "float")
        if tok.type == "ident":
            if tok.text == "True":
                self.advance()
                return ast.Literal(tok.span, True, "bool")
            if tok.text == "False":
                self.advance()
                return ast.Literal(tok.span, False, "bool")
            if tok.text == "INF":
                self.advance()
                return ast.Literal(tok.span, "INF", "inf")
            self.advance()
            if self.at("("):
                args, kwargs = self.parse_call_args()
                if kwargs:
                    self.fail("named arguments are only valid in method calls")
                return ast.CallExpr(tok.span, tok.text, args)
            return ast.Identifier(tok.span, tok.text)
        if tok.type == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        self.fail(
            f"unexpected {describe(tok)}",
            expected=("identifier", "literal", "("),
        )


def describe(tok: Token) -> str:
    if tok.type == "eof":
        return "end of input"
    if tok.type in ("ident", "intlit", "floatlit"):
        return f"{tok.type} {tok.text!r}"
    return f"{tok.text!r}"


def parse(tokens: List[Token]) -> Tuple[ast.Program, List[Diagnostic]]:
    parser = Parser(tokens)
    program = parser.parse_program()
    return program, parser.diagnostics


def parse_source(source: str) -> Tuple[ast.Program, List[Diagnostic]]:
    tokens, lex_diags = tokenize(source)
    program, parse_diags = parse(tokens)
    return program, lex_diags + parse_diags

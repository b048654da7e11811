"""Recursive descent parser for models.

Expression precedence, loosest to tightest::

    ||
    &&
    < <= > >= ==
    + -
    * /
    unary -
    ^          (right associative)
    atoms: literals, vectors, calls, variables, field access, primes

Statements are separated by ``;``. A separator is optional before a
closing ``end``/``else``/``case`` and after a compound statement that
itself closes with ``end``. Newlines carry no meaning.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import ParseError
from . import ast
from .lexer import EOF, IDENT, KEYWORD, REAL, STRING, SYMBOL, Token, lex

BINARY_LEVELS: tuple[tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("<", "<=", ">", ">=", "=="),
    ("+", "-"),
    ("*", "/"),
)

BOOL_WORDS = {"true": True, "True": True, "false": False, "False": False}


class Parser:
    def __init__(self, tokens: Sequence[Token]) -> None:
        self.tokens = list(tokens)
        if self.tokens:
            last = self.tokens[-1]
            eof = Token(EOF, "", last.line, last.column + len(last.text))
        else:
            eof = Token(EOF, "", 1, 1)
        self.tokens.append(eof)
        self.i = 0
        # Alternatives probed at position ``_tried_at``; they make up the expected set of an error there.
        self._tried_at = -1
        self._tried: set[str] = set()

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _probe(self, what: str) -> None:
        if self._tried_at != self.i:
            self._tried_at = self.i
            self._tried = set()
        self._tried.add(what)

    def at(self, text: str) -> bool:
        self._probe(text)
        t = self.tok
        return t.kind in (SYMBOL, KEYWORD) and t.text == text

    def at_any(self, texts: Iterable[str]) -> bool:
        return any(self.at(t) for t in texts)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"unexpected {self.tok.describe()}", {text})
        t = self.tok
        self.i += 1
        return t

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.tok
        self._probe(what)
        if t.kind != IDENT:
            self.fail(f"unexpected {t.describe()}", {what})
        self.i += 1
        return t

    def fail(self, message: str, expected: Iterable[str] = ()) -> None:
        t = self.tok
        expected = set(expected)
        if self._tried_at == self.i:
            expected |= self._tried
        raise ParseError(message, t.line, t.column, frozenset(expected))

    # -- model --------------------------------------------------------------

    def model(self) -> list[ast.ClassDef]:
        classes = []
        while self.tok.kind != EOF:
            if not self.at("class"):
                self.fail(f"unexpected {self.tok.describe()}", {"class", "end of input"})
            classes.append(self.class_def())
        return classes

    def class_def(self) -> ast.ClassDef:
        start = self.expect("class")
        name = self.expect_ident("class name").text
        self.expect("(")
        params: list[str] = []
        if not self.at(")"):
            params.append(self.expect_ident("parameter name").text)
            while self.accept(","):
                params.append(self.expect_ident("parameter name").text)
        self.expect(")")
        privates: tuple[ast.Private, ...] = ()
        if self.accept("private"):
            privates = self.private_section()
        body = self.statements(("end",))
        self.expect("end")
        return ast.ClassDef(name, tuple(params), privates, body, pos=(start.line, start.column))

    def private_section(self) -> tuple[ast.Private, ...]:
        decls = []
        while not self.at("end"):
            decls.append(self.private_decl())
            if not self.accept(";") and not self.at("end"):
                self.fail(f"unexpected {self.tok.describe()}", {";", "end"})
        self.expect("end")
        return tuple(decls)

    def private_decl(self) -> ast.Private:
        t = self.expect_ident("variable name")
        primes = self.primes()
        self.expect("=")
        pos = (t.line, t.column)
        if self.at("create"):
            init: ast.Expr | ast.Create = self.create_tail(ast.Var(t.text, primes, pos=pos), pos)
        else:
            init = self.expr()
        return ast.Private(t.text, primes, init, pos=pos)

    # -- statements ---------------------------------------------------------

    def statements(self, terminators: tuple[str, ...]) -> tuple[ast.Stmt, ...]:
        stmts: list[ast.Stmt] = []
        while not self.at_any(terminators):
            stmt = self.statement()
            stmts.append(stmt)
            if self.accept(";") or self.at_any(terminators):
                continue
            if isinstance(stmt, (ast.If, ast.Switch)):
                continue
            self.fail(f"unexpected {self.tok.describe()}", {";", *terminators})
        return tuple(stmts)

    def statement(self) -> ast.Stmt:
        t = self.tok
        pos = (t.line, t.column)
        if self.accept("if"):
            cond = self.expr()
            then = self.statements(("else", "end"))
            orelse: tuple[ast.Stmt, ...] = ()
            if self.accept("else"):
                orelse = self.statements(("end",))
            self.expect("end")
            return ast.If(cond, then, orelse, pos=pos)
        if self.accept("switch"):
            subject = self.expr()
            cases = []
            while self.accept("case"):
                label = self.case_label()
                cases.append((label, self.statements(("case", "end"))))
            self.expect("end")
            return ast.Switch(subject, tuple(cases), pos=pos)
        if self.accept("terminate"):
            return ast.Terminate(self.expr(), pos=pos)
        if t.kind != IDENT:
            self.fail(f"unexpected {t.describe()}", {"identifier", "if", "switch", "terminate"})
        target = self.postfix()
        if self.accept("[=]"):
            return ast.ContinuousAssign(target, self.expr(), pos=pos)
        if self.accept("="):
            if self.at("create"):
                return self.create_tail(target, pos)
            return ast.DiscreteAssign(target, self.expr(), pos=pos)
        self.fail(f"unexpected {self.tok.describe()}", {"[=]", "="})
        raise AssertionError("unreachable")

    def case_label(self) -> ast.Expr:
        t = self.tok
        label = self.unary()
        literal = isinstance(label, (ast.RealLit, ast.StringLit, ast.BoolLit)) or (
            isinstance(label, ast.Unary) and label.op == "-" and isinstance(label.operand, ast.RealLit)
        )
        if not literal:
            raise ParseError("case label must be a literal", t.line, t.column, frozenset({"literal"}))
        return label

    def create_tail(self, binder: ast.Target, pos: tuple[int, int]) -> ast.Create:
        self.expect("create")
        cls = self.expect_ident("class name").text
        self.expect("(")
        args = self.arguments()
        return ast.Create(binder, cls, args, pos=pos)

    # -- expressions --------------------------------------------------------

    def expr(self) -> ast.Expr:
        return self.binary(0)

    def binary(self, level: int) -> ast.Expr:
        if level == len(BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = BINARY_LEVELS[level]
        while self.tok.kind == SYMBOL and self.tok.text in ops:
            op = self.tok
            self.i += 1
            right = self.binary(level + 1)
            left = ast.Binary(op.text, left, right, pos=(op.line, op.column))
        return left

    def unary(self) -> ast.Expr:
        t = self.tok
        if self.accept("-"):
            return ast.Unary("-", self.unary(), pos=(t.line, t.column))
        return self.power()

    def power(self) -> ast.Expr:
        base = self.atom()
        t = self.tok
        if self.accept("^"):
            return ast.Binary("^", base, self.unary(), pos=(t.line, t.column))
        return base

    def atom(self) -> ast.Expr:
        t = self.tok
        pos = (t.line, t.column)
        if t.kind == REAL:
            self.i += 1
            return ast.RealLit(float(t.text), pos=pos)
        if t.kind == STRING:
            self.i += 1
            return ast.StringLit(t.text, pos=pos)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if self.accept("["):
            elements: list[ast.Expr] = []
            if not self.at("]"):
                elements.append(self.expr())
                while self.accept(","):
                    elements.append(self.expr())
            self.expect("]")
            return ast.VectorLit(tuple(elements), pos=pos)
        if t.kind == IDENT:
            if t.text in BOOL_WORDS:
                self.i += 1
                return ast.BoolLit(BOOL_WORDS[t.text], pos=pos)
            if self.tokens[self.i + 1].kind == SYMBOL and self.tokens[self.i + 1].text == "(":
                self.i += 2
                return ast.Call(t.text, self.arguments(), pos=pos)
            return self.postfix()
        self.fail(f"unexpected {t.describe()}", {"expression"})
        raise AssertionError("unreachable")

    def arguments(self) -> tuple[ast.Expr, ...]:
        """Comma separated expressions up to and including the closing ``)``."""
        args: list[ast.Expr] = []
        if not self.at(")"):
            args.append(self.expr())
            while self.accept(","):
                args.append(self.expr())
        self.expect(")")
        return tuple(args)

    def postfix(self) -> ast.Target:
        t = self.expect_ident()
        node: ast.Target = ast.Var(t.text, self.primes(), pos=(t.line, t.column))
        while self.at("."):
            if node.primes:
                self.fail("field access on a derivative", {"[=]", "="})
            self.i += 1
            f = self.expect_ident("field name")
            node = ast.FieldAccess(node, f.text, self.primes(), pos=(f.line, f.column))
        return node

    def primes(self) -> int:
        count = 0
        while self.accept("'"):
            count += 1
        return count

    def finish(self) -> None:
        if self.tok.kind != EOF:
            self.fail(f"unexpected {self.tok.describe()}", {"end of input"})


def parse_model(tokens: Sequence[Token]) -> list[ast.ClassDef]:
    return Parser(tokens).model()


def parse_expr(tokens: Sequence[Token]) -> ast.Expr:
    p = Parser(tokens)
    e = p.expr()
    p.finish()
    return e


def parse_expr_list(tokens: Sequence[Token]) -> tuple[ast.Expr, ...]:
    """Parse ``e1, e2, ...`` (possibly empty); used for command-line root arguments."""
    p = Parser(tokens)
    items: list[ast.Expr] = []
    if p.tok.kind != EOF:
        items.append(p.expr())
        while p.accept(","):
            items.append(p.expr())
    p.finish()
    return tuple(items)


def parse_source(source: str) -> list[ast.ClassDef]:
    """Lex and parse model text in one call."""
    return parse_model(lex(source))

"""Static diagnostics run by ``acumen-lite check`` before any simulation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LexError, ParseError
from .syntax import ast, parse_source
from .syntax.ast import split_key
from .values import BUILTINS


@dataclass(frozen=True, order=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def format(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.column}: {self.message}"


def _at(node, message: str) -> Diagnostic:
    line, col = node.pos if getattr(node, "pos", None) else (0, 0)
    return Diagnostic(line, col, message)


class _ClassChecker:
    def __init__(self, cls: ast.ClassDef, classes: dict[str, ast.ClassDef], out: list[Diagnostic]) -> None:
        self.cls = cls
        self.classes = classes
        self.out = out
        self.declared: set[str] = set()
        # binder key -> class it is created from, when statically known
        self.children: dict[str, str] = {}

    def run(self) -> None:
        cls = self.cls
        for p in cls.params:
            if p in self.declared:
                self.out.append(_at(cls, f"class {cls.name}: duplicate parameter {p!r}"))
            self.declared.add(p)
        for decl in cls.privates:
            # Initializers see params and earlier privates only.
            if isinstance(decl.init, ast.Create):
                self.create_site(decl.init)
                self.children[decl.key] = decl.init.class_name
            else:
                self.expr(decl.init)
            if decl.key in self.declared:
                self.out.append(_at(decl, f"class {cls.name}: {decl.key!r} declared twice"))
            self.declared.add(decl.key)
        orders: dict[str, int] = {}
        for key in self.declared:
            base, primes = split_key(key)
            orders[base] = max(orders.get(base, 0), primes)
        for base, order in sorted(orders.items()):
            missing = [base + "'" * k for k in range(order) if base + "'" * k not in self.declared]
            if missing:
                self.out.append(_at(cls, f"class {cls.name}: {base + chr(39) * order!r} declared without {', '.join(missing)}"))
        self.stmts(cls.body)

    # -- statements ------------------------------------------------------------

    def stmts(self, stmts: Iterable[ast.Stmt]) -> None:
        for s in stmts:
            if isinstance(s, (ast.ContinuousAssign, ast.DiscreteAssign)):
                self.expr(s.target)
                self.expr(s.rhs)
            elif isinstance(s, ast.If):
                self.expr(s.cond)
                self.stmts(s.then)
                self.stmts(s.orelse)
            elif isinstance(s, ast.Switch):
                self.expr(s.subject)
                for _, body in s.cases:
                    self.stmts(body)
            elif isinstance(s, ast.Create):
                self.expr(s.binder)
                self.create_site(s)
            elif isinstance(s, ast.Terminate):
                self.expr(s.object)

    def create_site(self, c: ast.Create) -> None:
        for a in c.args:
            self.expr(a)
        target = self.classes.get(c.class_name)
        if target is None:
            self.out.append(_at(c, f"unknown class {c.class_name!r}"))
        elif len(c.args) != len(target.params):
            self.out.append(_at(c, f"class {c.class_name} takes {len(target.params)} argument(s), got {len(c.args)}"))

    # -- expressions -----------------------------------------------------------

    def expr(self, e: ast.Expr) -> None:
        if isinstance(e, (ast.Var, ast.FieldAccess)):
            self.reference(e)
        elif isinstance(e, ast.VectorLit):
            for x in e.elements:
                self.expr(x)
        elif isinstance(e, ast.Unary):
            self.expr(e.operand)
        elif isinstance(e, ast.Binary):
            self.expr(e.left)
            self.expr(e.right)
        elif isinstance(e, ast.Call):
            entry = BUILTINS.get(e.function)
            if entry is None:
                self.out.append(_at(e, f"unknown function {e.function!r}"))
            elif len(e.args) != entry[0]:
                self.out.append(_at(e, f"{e.function}() takes {entry[0]} argument(s), got {len(e.args)}"))
            for a in e.args:
                self.expr(a)

    def reference(self, e: ast.Expr) -> str | None:
        """Check a name or field path; return the class it refers to when known."""
        if isinstance(e, ast.Var):
            if e.key not in self.declared:
                self.out.append(_at(e, f"undeclared name {e.key!r} in class {self.cls.name}"))
                return None
            return self.children.get(e.key)
        assert isinstance(e, ast.FieldAccess)
        owner = self.reference(e.object) if isinstance(e.object, (ast.Var, ast.FieldAccess)) else None
        if owner is None or owner not in self.classes:
            return None
        target = self.classes[owner]
        fields = set(target.params) | {d.key for d in target.privates}
        if e.key not in fields:
            self.out.append(_at(e, f"class {owner} has no field {e.key!r}"))
            return None
        for d in target.privates:
            if d.key == e.key and isinstance(d.init, ast.Create):
                return d.init.class_name
        return None


def check_model(model: Sequence[ast.ClassDef]) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    classes: dict[str, ast.ClassDef] = {}
    for c in model:
        if c.name in classes:
            out.append(_at(c, f"class {c.name!r} defined twice"))
        else:
            classes[c.name] = c
    for c in model:
        _ClassChecker(c, classes, out).run()
    return sorted(set(out))


def check_source(source: str) -> tuple[list[ast.ClassDef] | None, list[Diagnostic]]:
    """Parse and check ``source``; the model is ``None`` when it does not parse."""
    try:
        model = parse_source(source)
    except (LexError, ParseError) as exc:
        return None, [Diagnostic(exc.line, exc.column, str(exc).split(": ", 1)[1])]
    return model, check_model(model)

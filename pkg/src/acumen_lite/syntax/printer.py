"""Render ASTs back to source text with the minimum parentheses needed to re-parse."""

from __future__ import annotations

import math
from typing import Sequence

from . import ast

# Binding strength; higher binds tighter.
_LEVEL = {"||": 1, "&&": 2, "<": 3, "<=": 3, ">": 3, ">=": 3, "==": 3, "+": 4, "-": 4, "*": 5, "/": 5}
_UNARY = 6
_POWER = 7
_ATOM = 8

INDENT = "  "


def format_real(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot print non-finite literal {value!r}")
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _strength(e: ast.Expr) -> int:
    if isinstance(e, ast.Binary):
        return _POWER if e.op == "^" else _LEVEL[e.op]
    if isinstance(e, ast.Unary):
        return _UNARY
    if isinstance(e, ast.RealLit) and e.value < 0:
        return _UNARY
    return _ATOM


def _wrap(e: ast.Expr, minimum: int) -> str:
    text = format_expr(e)
    return f"({text})" if _strength(e) < minimum else text


def format_expr(e: ast.Expr) -> str:
    if isinstance(e, ast.RealLit):
        return format_real(e.value)
    if isinstance(e, ast.StringLit):
        escaped = e.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.VectorLit):
        return "[" + ", ".join(format_expr(x) for x in e.elements) + "]"
    if isinstance(e, ast.Var):
        return e.key
    if isinstance(e, ast.FieldAccess):
        return f"{format_expr(e.object)}.{e.key}"
    if isinstance(e, ast.Call):
        return f"{e.function}(" + ", ".join(format_expr(a) for a in e.args) + ")"
    if isinstance(e, ast.Unary):
        inner = _wrap(e.operand, _UNARY)
        return f"{e.op} {inner}" if inner.startswith("-") else f"{e.op}{inner}"
    if isinstance(e, ast.Binary):
        if e.op == "^":
            left = _wrap(e.left, _ATOM)
            right = _wrap(e.right, _UNARY)
        else:
            level = _LEVEL[e.op]
            left = _wrap(e.left, level)
            right = _wrap(e.right, level + 1)
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def _stmts(stmts: Sequence[ast.Stmt], depth: int) -> list[str]:
    lines: list[str] = []
    for k, s in enumerate(stmts):
        chunk = _stmt(s, depth)
        if k < len(stmts) - 1:
            chunk[-1] += ";"
        lines.extend(chunk)
    return lines


def _create(c: ast.Create) -> str:
    args = ", ".join(format_expr(a) for a in c.args)
    return f"{format_expr(c.binder)} = create {c.class_name} ({args})"


def _stmt(s: ast.Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(s, ast.ContinuousAssign):
        return [f"{pad}{format_expr(s.target)} [=] {format_expr(s.rhs)}"]
    if isinstance(s, ast.DiscreteAssign):
        return [f"{pad}{format_expr(s.target)} = {format_expr(s.rhs)}"]
    if isinstance(s, ast.Create):
        return [pad + _create(s)]
    if isinstance(s, ast.Terminate):
        return [f"{pad}terminate {format_expr(s.object)}"]
    if isinstance(s, ast.If):
        lines = [f"{pad}if ({format_expr(s.cond)})"]
        lines += _stmts(s.then, depth + 1)
        if s.orelse:
            lines.append(f"{pad}else")
            lines += _stmts(s.orelse, depth + 1)
        lines.append(f"{pad}end")
        return lines
    if isinstance(s, ast.Switch):
        lines = [f"{pad}switch ({format_expr(s.subject)})"]
        for label, body in s.cases:
            lines.append(f"{pad}case {format_expr(label)}")
            lines += _stmts(body, depth + 1)
        lines.append(f"{pad}end")
        return lines
    raise TypeError(f"not a statement: {s!r}")


def format_class(c: ast.ClassDef) -> str:
    lines = [f"class {c.name} (" + ", ".join(c.params) + ")"]
    if c.privates:
        lines.append(f"{INDENT}private")
        for k, p in enumerate(c.privates):
            if isinstance(p.init, ast.Create):
                text = _create(p.init)
            else:
                text = f"{p.key} = {format_expr(p.init)}"
            lines.append(INDENT * 2 + text + (";" if k < len(c.privates) - 1 else ""))
        lines.append(f"{INDENT}end")
    lines += _stmts(c.body, 1)
    lines.append("end")
    return "\n".join(lines)


def pretty_print(model: Sequence[ast.ClassDef]) -> str:
    return "\n\n".join(format_class(c) for c in model) + ("\n" if model else "")

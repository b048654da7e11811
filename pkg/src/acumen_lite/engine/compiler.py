"""Compile expressions into zero-argument closures bound to one object's fields.

Field access through object references is resolved when the closure is
built, so compiled code is only valid for the store structure it was
compiled against. The store's ``version`` tracks that.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Callable

from ..errors import EvalError
from ..syntax import ast
from ..values import BUILTINS, ObjRef, eval_binary, eval_unary, kind

if TYPE_CHECKING:
    from .store import ObjectInstance, ObjectStore

Thunk = Callable[[], object]
Read = tuple  # (object id, field key)


def _const(v: object) -> Thunk:
    return lambda: v


def _raiser(message: str) -> Thunk:
    def fail() -> object:
        raise EvalError(message)
    return fail


def resolve(expr: ast.Expr, obj: "ObjectInstance", store: "ObjectStore") -> tuple["ObjectInstance", str] | str:
    """Find the ``(object, key)`` a variable or field access names.

    Returns an error message instead when the path cannot be resolved
    because an intermediate reference is dangling or not an object.
    Undeclared names raise immediately.
    """
    if isinstance(expr, ast.Var):
        if expr.key not in obj.fields:
            raise EvalError(f"undeclared name {expr.key!r} in class {obj.cls}")
        return obj, expr.key
    if isinstance(expr, ast.FieldAccess):
        found = resolve(expr.object, obj, store)
        if isinstance(found, str):
            return found
        owner, key = found
        ref = owner.fields[key]
        if type(ref) is not ObjRef:
            return f"{key!r} is not an object (it is {kind(ref)})"
        child = store.objects.get(ref.id)
        if child is None:
            return f"dangling object reference {key!r} ({ref})"
        if expr.key not in child.fields:
            raise EvalError(f"class {child.cls} has no field {expr.key!r}")
        return child, expr.key
    raise EvalError(f"not a variable or field: {type(expr).__name__}")


def compile_expr(expr: ast.Expr, obj: "ObjectInstance", store: "ObjectStore", reads: set | None = None) -> Thunk:
    """Build a closure evaluating ``expr`` in the context of ``obj``.

    Every ``(object id, key)`` the closure reads is added to ``reads``.
    """
    if reads is None:
        reads = set()
    return _compile(expr, obj, store, reads)


def _compile(e: ast.Expr, obj: "ObjectInstance", store: "ObjectStore", reads: set) -> Thunk:
    if isinstance(e, ast.RealLit):
        return _const(float(e.value))
    if isinstance(e, (ast.StringLit, ast.BoolLit)):
        return _const(e.value)
    if isinstance(e, (ast.Var, ast.FieldAccess)):
        found = resolve(e, obj, store)
        if isinstance(found, str):
            return _raiser(found)
        owner, key = found
        reads.add((owner.id, key))
        fields = owner.fields
        return lambda: fields[key]
    if isinstance(e, ast.VectorLit):
        parts = [_compile(x, obj, store, reads) for x in e.elements]
        if all(isinstance(x, ast.RealLit) for x in e.elements):
            return _const(tuple(float(x.value) for x in e.elements))
        return lambda: tuple(p() for p in parts)
    if isinstance(e, ast.Unary):
        inner = _compile(e.operand, obj, store, reads)
        op = e.op

        def neg() -> object:
            v = inner()
            if type(v) is float:
                return -v
            return eval_unary(op, v)
        return neg
    if isinstance(e, ast.Binary):
        return _binary(e.op, _compile(e.left, obj, store, reads), _compile(e.right, obj, store, reads))
    if isinstance(e, ast.Call):
        if e.function not in BUILTINS:
            raise EvalError(f"unknown function {e.function!r}")
        arity, impl = BUILTINS[e.function]
        if len(e.args) != arity:
            raise EvalError(f"{e.function}() takes {arity} argument(s), got {len(e.args)}")
        args = [_compile(a, obj, store, reads) for a in e.args]
        if arity == 1:
            a0 = args[0]
            return lambda: impl(a0())
        return lambda: impl(*[a() for a in args])
    raise EvalError(f"cannot evaluate {type(e).__name__}")


def _binary(op: str, lf: Thunk, rf: Thunk) -> Thunk:
    # Float-float fast paths; everything else (and every error) goes through eval_binary.
    if op == "+":
        def f() -> object:
            a, b = lf(), rf()
            if type(a) is float and type(b) is float:
                return a + b
            return eval_binary(op, a, b)
    elif op == "-":
        def f() -> object:
            a, b = lf(), rf()
            if type(a) is float and type(b) is float:
                return a - b
            return eval_binary(op, a, b)
    elif op == "*":
        def f() -> object:
            a, b = lf(), rf()
            if type(a) is float and type(b) is float:
                return a * b
            return eval_binary(op, a, b)
    elif op == "<":
        def f() -> object:
            a, b = lf(), rf()
            if type(a) is float and type(b) is float:
                return a < b
            return eval_binary(op, a, b)
    else:
        def f() -> object:
            return eval_binary(op, lf(), rf())
    return f


def eval_constants(text: str) -> list[object]:
    """Evaluate comma-separated expressions that reference no variables (root arguments)."""
    from ..syntax import lex, parse_expr_list
    from .store import ObjectInstance

    scratch = ObjectInstance(-1, "<constant>", {}, {}, None)
    return [_compile(e, scratch, None, set())() for e in parse_expr_list(lex(text))]  # type: ignore[arg-type]

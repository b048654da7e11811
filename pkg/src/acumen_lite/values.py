"""Runtime values, arithmetic, and the builtin function table.

Values are plain immutable Python objects:

=========  ==========================================
Bool       ``bool``
Real       ``float`` (always float, never int)
Str        ``str``
Vec        ``tuple`` of values
Mat        ``tuple`` of equal-length tuples of floats
ObjRef     :class:`ObjRef`
=========  ==========================================

Arithmetic is defined on reals and on vectors of reals only. Nested
vectors (matrices, shape records) can be built, compared and flattened
but not computed with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Union

from .errors import EvalError, NumericError

ASIN_SLACK = 1e-9


@dataclass(frozen=True)
class ObjRef:
    id: int

    def __str__(self) -> str:
        return f"#{self.id}"


Value = Union[bool, float, str, tuple, ObjRef]


def kind(v: Any) -> str:
    t = type(v)
    if t is float:
        return "Real"
    if t is bool:
        return "Bool"
    if t is str:
        return "Str"
    if t is tuple:
        return "Mat" if is_matrix(v) else "Vec"
    if t is ObjRef:
        return "ObjRef"
    return t.__name__


def is_matrix(v: Any) -> bool:
    if type(v) is not tuple or not v or type(v[0]) is not tuple:
        return False
    width = len(v[0])
    return all(type(row) is tuple and len(row) == width and all(type(x) is float for x in row) for row in v)


def to_value(x: Any) -> Value:
    """Coerce a Python literal (int, list, ...) into a runtime value."""
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, (list, tuple)):
        return tuple(to_value(e) for e in x)
    if isinstance(x, (str, ObjRef)):
        return x
    raise EvalError(f"cannot convert {x!r} to a value")


def same(a: Value, b: Value) -> bool:
    """Identity test used for change detection: kinds must agree and NaN equals NaN."""
    ta = type(a)
    if ta is not type(b):
        return False
    if ta is float:
        return a == b or (a != a and b != b)
    if ta is tuple:
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return a == b


def _real_vec(v: tuple, op: str) -> tuple:
    for x in v:
        if type(x) is not float:
            raise EvalError(f"operator {op!r} needs a vector of reals, got element of kind {kind(x)}")
    return v


def _mismatch(op: str, a: Value, b: Value) -> EvalError:
    return EvalError(f"operator {op!r} not defined for {kind(a)} and {kind(b)}")


def _arith(op: str, a: float, b: float) -> float:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise NumericError(f"division by zero in {a!r} / {b!r}", "/")
        return a / b
    if op == "^":
        try:
            return math.pow(a, b)
        except (ValueError, OverflowError) as exc:
            raise NumericError(f"{exc} in {a!r} ^ {b!r}", "^") from None
    raise EvalError(f"unknown operator {op!r}")


def eval_binary(op: str, a: Value, b: Value) -> Value:
    ta, tb = type(a), type(b)
    if op in ("&&", "||"):
        if ta is not bool or tb is not bool:
            raise _mismatch(op, a, b)
        return (a and b) if op == "&&" else (a or b)
    if op == "==":
        if ta is not tb or ta is ObjRef:
            raise _mismatch(op, a, b)
        return same(a, b)
    if op in ("<", "<=", ">", ">="):
        if ta is not float or tb is not float:
            raise _mismatch(op, a, b)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    if ta is float and tb is float:
        return _arith(op, a, b)
    if ta is tuple and tb is tuple and op in ("+", "-"):
        _real_vec(a, op)
        _real_vec(b, op)
        if len(a) != len(b):
            raise EvalError(f"operator {op!r} on vectors of length {len(a)} and {len(b)}")
        if op == "+":
            return tuple(x + y for x, y in zip(a, b))
        return tuple(x - y for x, y in zip(a, b))
    if op == "*" and ta is float and tb is tuple:
        return tuple(a * y for y in _real_vec(b, op))
    if op in ("*", "/") and ta is tuple and tb is float:
        _real_vec(a, op)
        if op == "*":
            return tuple(x * b for x in a)
        if b == 0.0:
            raise NumericError("division of vector by zero", "/")
        return tuple(x / b for x in a)
    raise _mismatch(op, a, b)


def eval_unary(op: str, a: Value) -> Value:
    if op == "-":
        if type(a) is float:
            return -a
        if type(a) is tuple:
            return tuple(-x for x in _real_vec(a, "-"))
    raise EvalError(f"unary {op!r} not defined for {kind(a)}")


# -- builtins ---------------------------------------------------------------

def _real(name: str, x: Value) -> float:
    if type(x) is not float:
        raise EvalError(f"{name}() expects a real, got {kind(x)}")
    return x


def _unary_math(name: str, fn: Callable[[float], float]) -> Callable[[Value], float]:
    def impl(x: Value) -> float:
        try:
            return fn(_real(name, x))
        except (ValueError, OverflowError) as exc:
            raise NumericError(f"{name}({x!r}): {exc}", name) from None
    return impl


def _asin(x: Value) -> float:
    x = _real("asin", x)
    if -1.0 <= x <= 1.0:
        return math.asin(x)
    if abs(x) <= 1.0 + ASIN_SLACK:
        return math.copysign(math.pi / 2, x)
    raise NumericError(f"asin({x!r}): argument outside [-1, 1]", "asin")


def _dot(a: Value, b: Value) -> float:
    if type(a) is not tuple or type(b) is not tuple:
        raise EvalError(f"dot() expects two vectors, got {kind(a)} and {kind(b)}")
    _real_vec(a, "dot")
    _real_vec(b, "dot")
    if len(a) != len(b):
        raise EvalError(f"dot() on vectors of length {len(a)} and {len(b)}")
    total = 0.0
    for x, y in zip(a, b):
        total += x * y
    return total


def _norm(v: Value) -> float:
    return math.sqrt(_dot(v, v))


def _floor(x: Value) -> float:
    x = _real("floor", x)
    if not math.isfinite(x):
        raise NumericError(f"floor({x!r})", "floor")
    return float(math.floor(x))


BUILTINS: dict[str, tuple[int, Callable[..., Value]]] = {
    "sin": (1, _unary_math("sin", math.sin)),
    "cos": (1, _unary_math("cos", math.cos)),
    "asin": (1, _asin),
    "sqrt": (1, _unary_math("sqrt", math.sqrt)),
    "abs": (1, lambda x: abs(_real("abs", x))),
    "floor": (1, _floor),
    "dot": (2, _dot),
    "norm": (1, _norm),
}


def eval_call(name: str, args: list[Value] | tuple[Value, ...]) -> Value:
    try:
        arity, impl = BUILTINS[name]
    except KeyError:
        raise EvalError(f"unknown function {name!r}") from None
    if len(args) != arity:
        raise EvalError(f"{name}() takes {arity} argument(s), got {len(args)}")
    return impl(*args)


# -- flattening -------------------------------------------------------------

def flatten(value: Value, prefix: str) -> list[tuple[str, Union[float, str, bool]]]:
    """Scalarize a value into ``(path, scalar)`` pairs; vectors index as ``prefix[i]``."""
    out: list[tuple[str, Union[float, str, bool]]] = []
    _flatten_into(value, prefix, out)
    return out


def _flatten_into(value: Value, prefix: str, out: list) -> None:
    if type(value) is tuple:
        for k, item in enumerate(value):
            _flatten_into(item, f"{prefix}[{k}]", out)
    elif type(value) is ObjRef:
        out.append((prefix, str(value)))
    else:
        out.append((prefix, value))

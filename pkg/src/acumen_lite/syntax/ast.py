"""AST node types.

Every node is a frozen dataclass. Source positions are carried in ``pos``
as ``(line, column)`` and excluded from equality, so two parses of
differently formatted but equivalent text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

Pos = Optional[Tuple[int, int]]


def _pos() -> Pos:
    return field(default=None, compare=False, repr=False)


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class RealLit:
    value: float
    pos: Pos = _pos()


@dataclass(frozen=True)
class StringLit:
    value: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: Pos = _pos()


@dataclass(frozen=True)
class VectorLit:
    elements: Tuple["Expr", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    primes: int = 0
    pos: Pos = _pos()

    @property
    def key(self) -> str:
        return field_key(self.name, self.primes)


@dataclass(frozen=True)
class FieldAccess:
    object: "Expr"
    field: str
    primes: int = 0
    pos: Pos = _pos()

    @property
    def key(self) -> str:
        return field_key(self.field, self.primes)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call:
    function: str
    args: Tuple["Expr", ...]
    pos: Pos = _pos()


Expr = Union[RealLit, StringLit, BoolLit, VectorLit, Var, FieldAccess, Unary, Binary, Call]
Target = Union[Var, FieldAccess]


# -- statements --------------------------------------------------------------

@dataclass(frozen=True)
class ContinuousAssign:
    target: Target
    rhs: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class DiscreteAssign:
    target: Target
    rhs: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()
    pos: Pos = _pos()


@dataclass(frozen=True)
class Switch:
    subject: Expr
    cases: Tuple[Tuple[Expr, Tuple["Stmt", ...]], ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Create:
    binder: Target
    class_name: str
    args: Tuple[Expr, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Terminate:
    object: Expr
    pos: Pos = _pos()


Stmt = Union[ContinuousAssign, DiscreteAssign, If, Switch, Create, Terminate]


# -- declarations ------------------------------------------------------------

@dataclass(frozen=True)
class Private:
    """One ``private`` declaration. ``init`` is an expression or a ``Create`` bound to this name."""

    name: str
    primes: int
    init: Union[Expr, Create]
    pos: Pos = _pos()

    @property
    def key(self) -> str:
        return field_key(self.name, self.primes)


@dataclass(frozen=True)
class ClassDef:
    name: str
    params: Tuple[str, ...] = ()
    privates: Tuple[Private, ...] = ()
    body: Tuple[Stmt, ...] = ()
    pos: Pos = _pos()


def field_key(name: str, primes: int) -> str:
    """Storage key for a variable at a given derivative level: ``p``, ``p'``, ``p''``."""
    return name + "'" * primes


def split_key(key: str) -> Tuple[str, int]:
    base = key.rstrip("'")
    return base, len(key) - len(base)

"""Compiled form of every live object's body: continuous plan and discrete actions.

A :class:`Program` is rebuilt whenever the store's structure changes.
Guards are compiled along with the statements they enclose and are
re-evaluated every time, so branch changes need no recompilation.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..errors import AcumenError, EvalError, ModelError
from ..syntax import ast
from ..syntax.printer import format_expr
from ..values import ObjRef, Value, kind, same
from .compiler import Thunk, compile_expr, resolve
from .store import ObjectInstance, ObjectStore

Guard = Callable[[], bool]


def _where(obj: ObjectInstance, stmt) -> str:
    at = f" line {stmt.pos[0]}:{stmt.pos[1]}" if getattr(stmt, "pos", None) else ""
    name = obj.path or "<root>"
    return f"{obj.cls} ({name}){at}"


def _located(obj: ObjectInstance, stmt, exc: Exception) -> Exception:
    """Prefix an error with the statement it came from (once)."""
    if getattr(exc, "located", False) or not isinstance(exc, (EvalError, ModelError)):
        return exc
    err = type(exc)(f"{_where(obj, stmt)}: {exc}")
    err.located = True
    return err


def _guard_fn(cond: Thunk, expected: bool) -> Guard:
    def g() -> bool:
        v = cond()
        if type(v) is not bool:
            raise EvalError(f"condition must be boolean, got {kind(v)}")
        return v is expected
    return g


def _case_fn(subject: Thunk, label: Value) -> Guard:
    return lambda: same(subject(), label)


def _label_value(label: ast.Expr) -> Value:
    if isinstance(label, ast.Unary):
        return -float(label.operand.value)
    if isinstance(label, ast.RealLit):
        return float(label.value)
    return label.value


@dataclass(eq=False)
class Equation:
    owner: ObjectInstance
    target: ObjectInstance
    key: str
    rhs: ast.Expr
    stmt: ast.ContinuousAssign
    fn: Thunk
    reads: frozenset
    guards: tuple[Guard, ...] = ()

    @property
    def target_path(self) -> str:
        return self.target.qualify(self.key)

    def active(self) -> bool:
        for g in self.guards:
            if not g():
                return False
        return True


@dataclass(eq=False)
class Action:
    owner: ObjectInstance
    stmt: ast.Stmt
    guards: tuple[Guard, ...]
    fn: Thunk | None = None
    target: tuple[ObjectInstance, str] | str | None = None
    args: tuple[Thunk, ...] = ()


@dataclass(eq=False)
class DiscreteEvent:
    time: float
    kind: str  # "assign" | "create" | "terminate"
    path: str
    old: Value | None = None
    new: Value | None = None


@dataclass(eq=False)
class EquationPlan:
    """Continuous equations in an order where every same-instant read follows its writer."""

    equations: list[Equation]
    multi_writer: frozenset = frozenset()
    written: set = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.equations)

    def targets(self) -> list[str]:
        return [eq.target_path for eq in self.equations]

    def evaluate(self) -> set:
        """Run every active equation in order; returns the set of ``(id, key)`` written."""
        written: set = set()
        check = self.multi_writer
        for eq in self.equations:
            try:
                if eq.guards and not eq.active():
                    continue
                value = eq.fn()
            except AcumenError as exc:
                raise _located(eq.owner, eq.stmt, exc) from exc
            slot = (eq.target.id, eq.key)
            if check and slot in check and slot in written:
                raise ModelError(f"multiple continuous writers for {eq.target_path}")
            written.add(slot)
            eq.target.fields[eq.key] = value
        self.written = written
        return written


def _walk_body(stmts: Iterable[ast.Stmt], obj: ObjectInstance, store: ObjectStore, guards: tuple, guard_reads: frozenset, equations: list, actions: list) -> None:
    for s in stmts:
        try:
            if isinstance(s, ast.If):
                reads: set = set()
                cond = compile_expr(s.cond, obj, store, reads)
                inner = guard_reads | reads
                _walk_body(s.then, obj, store, guards + (_guard_fn(cond, True),), inner, equations, actions)
                _walk_body(s.orelse, obj, store, guards + (_guard_fn(cond, False),), inner, equations, actions)
            elif isinstance(s, ast.Switch):
                reads = set()
                subject = compile_expr(s.subject, obj, store, reads)
                inner = guard_reads | reads
                for label, body in s.cases:
                    _walk_body(body, obj, store, guards + (_case_fn(subject, _label_value(label)),), inner, equations, actions)
            elif isinstance(s, ast.ContinuousAssign):
                found = resolve(s.target, obj, store)
                if isinstance(found, str):
                    raise EvalError(f"cannot write {format_expr(s.target)}: {found}")
                target, key = found
                reads = set()
                fn = compile_expr(s.rhs, obj, store, reads)
                equations.append(Equation(obj, target, key, s.rhs, s, fn, frozenset(reads | guard_reads), guards))
            elif isinstance(s, ast.DiscreteAssign):
                actions.append(Action(obj, s, guards, fn=compile_expr(s.rhs, obj, store), target=resolve(s.target, obj, store)))
            elif isinstance(s, ast.Create):
                if s.class_name not in store.classes:
                    raise ModelError(f"unknown class {s.class_name!r}")
                args = tuple(compile_expr(a, obj, store) for a in s.args)
                actions.append(Action(obj, s, guards, target=resolve(s.binder, obj, store), args=args))
            elif isinstance(s, ast.Terminate):
                actions.append(Action(obj, s, guards, fn=compile_expr(s.object, obj, store)))
            else:  # pragma: no cover
                raise TypeError(s)
        except (EvalError, ModelError) as exc:
            raise _located(obj, s, exc) from exc


def _order(equations: list[Equation]) -> tuple[list[Equation], frozenset]:
    writers: dict[tuple, list[int]] = {}
    for i, eq in enumerate(equations):
        writers.setdefault((eq.target.id, eq.key), []).append(i)
    multi = frozenset(slot for slot, ws in writers.items() if len(ws) > 1)
    for slot in multi:
        ws = [equations[i] for i in writers[slot]]
        unguarded = [eq for eq in ws if not eq.guards]
        if len(unguarded) > 1:
            raise ModelError(f"multiple continuous writers for {ws[0].target_path}: "
                             + ", ".join(_where(eq.owner, eq.stmt) for eq in ws))
        try:
            live = [eq for eq in ws if eq.active()]
        except AcumenError:
            live = []
        if len(live) > 1:
            raise ModelError(f"multiple continuous writers for {ws[0].target_path}: "
                             + ", ".join(_where(eq.owner, eq.stmt) for eq in live))
    sorter: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
    for i, eq in enumerate(equations):
        preds = [w for r in eq.reads for w in writers.get(r, ())]
        sorter.add(i, *sorted(preds))
    try:
        order = list(sorter.static_order())
    except graphlib.CycleError as exc:
        cycle = exc.args[1]
        paths = " -> ".join(equations[i].target_path for i in reversed(cycle))
        raise ModelError(f"algebraic cycle: {paths}") from None
    return [equations[i] for i in order], multi


class Program:
    """Everything needed to advance one store version: plan, discrete actions, state chains."""

    def __init__(self, store: ObjectStore, plan: EquationPlan, actions: list[Action]) -> None:
        self.store = store
        self.version = store.version
        self.plan = plan
        self.actions = actions
        self.chains: list[tuple[ObjectInstance, tuple[str, ...]]] = []
        for obj in store.walk():
            for base, order in obj.chains():
                self.chains.append((obj, tuple(base + "'" * k for k in range(order + 1))))

    @classmethod
    def compile(cls, store: ObjectStore) -> "Program":
        equations: list[Equation] = []
        actions: list[Action] = []
        for obj in store.walk():
            _walk_body(store.classes[obj.cls].body, obj, store, (), frozenset(), equations, actions)
        ordered, multi = _order(equations)
        return cls(store, EquationPlan(ordered, multi), actions)

    def integrate(self, h: float, written: set | None = None) -> None:
        """Explicit Euler over every derivative chain, using pre-step derivatives.

        Levels written by a continuous equation in the latest evaluation
        are algebraic at this instant and are left alone.
        """
        if written is None:
            written = self.plan.written
        updates = []
        for obj, keys in self.chains:
            f = obj.fields
            old = [f[k] for k in keys]
            for level in range(len(keys) - 1):
                if (obj.id, keys[level]) in written:
                    continue
                updates.append((obj, f, keys[level], euler_update(old[level], old[level + 1], h)))
        for obj, f, key, value in updates:
            f[key] = value

    # -- discrete ------------------------------------------------------------

    def collect(self) -> list[tuple]:
        """Evaluate every enabled discrete action against the current store.

        Returns the effective changes; writes that leave a value unchanged
        are dropped. Two enabled writes to one path is an error even when
        they agree.
        """
        store = self.store
        seen: dict[tuple, Action] = {}
        changes: list[tuple] = []
        for act in self.actions:
            try:
                if act.guards and not all(g() for g in act.guards):
                    continue
                s = act.stmt
                if isinstance(s, ast.Terminate):
                    ref = act.fn()
                    if type(ref) is not ObjRef:
                        raise EvalError(f"terminate expects an object, got {kind(ref)}")
                    if ref.id not in store.objects:
                        raise EvalError(f"dangling object reference {ref}")
                    changes.append(("terminate", ref.id))
                    continue
                if isinstance(act.target, str):
                    raise EvalError(f"cannot write {format_expr(s.binder if isinstance(s, ast.Create) else s.target)}: {act.target}")
                target, key = act.target
                slot = (target.id, key)
                if slot in seen:
                    raise ModelError(f"conflicting discrete writers for {target.qualify(key)}: "
                                     f"{_where(seen[slot].owner, seen[slot].stmt)} and {_where(act.owner, s)}")
                seen[slot] = act
                if isinstance(s, ast.Create):
                    args = [a() for a in act.args]
                    changes.append(("create", target, key, s.class_name, args, act.owner))
                else:
                    value = act.fn()
                    if not same(target.fields[key], value):
                        changes.append(("assign", target, key, value))
            except AcumenError as exc:
                raise _located(act.owner, act.stmt, exc) from exc
        return changes

    def apply(self, changes: list[tuple], events: Callable[[DiscreteEvent], None] | None) -> None:
        store = self.store
        t = store.time
        for ch in changes:
            if ch[0] == "assign":
                _, target, key, value = ch
                old = target.fields[key]
                target.fields[key] = value
                if type(old) is ObjRef or type(value) is ObjRef:
                    store.version += 1
                if events:
                    events(DiscreteEvent(t, "assign", target.qualify(key), old, value))
        for ch in changes:
            if ch[0] == "create":
                _, target, key, class_name, args, owner = ch
                old = target.fields[key]
                child = store.create(class_name, args, owner, key)
                target.fields[key] = ObjRef(child.id)
                if events:
                    events(DiscreteEvent(t, "create", child.path, old, ObjRef(child.id)))
        for ch in changes:
            if ch[0] == "terminate" and ch[1] in store.objects:
                path = store.objects[ch[1]].path
                store.terminate(ch[1])
                if events:
                    events(DiscreteEvent(t, "terminate", path, ObjRef(ch[1]), None))
        store.events_fired += len(changes)


def euler_update(x: Value, dx: Value, h: float) -> Value:
    if type(x) is float and type(dx) is float:
        return x + h * dx
    if type(x) is tuple and type(dx) is tuple and len(x) == len(dx):
        if all(type(a) is float for a in x) and all(type(b) is float for b in dx):
            return tuple(a + h * b for a, b in zip(x, dx))
    raise EvalError(f"cannot integrate {kind(x)} with derivative {kind(dx)}")


# -- public operations ---------------------------------------------------------

def plan_continuous(store: ObjectStore) -> EquationPlan:
    """Collect and order the continuous equations of every live object."""
    return store.program().plan


def continuous_step(store: ObjectStore, plan: EquationPlan, h: float) -> ObjectStore:
    """Evaluate ``plan`` then advance every derivative chain by one Euler step of size ``h``."""
    if not h > 0:
        raise ValueError("time step must be positive")
    written = plan.evaluate()
    store.program().integrate(h, written)
    return store


def discrete_fixpoint(store: ObjectStore, max_iterations: int = 1000, events: Callable[[DiscreteEvent], None] | None = None) -> bool:
    """Fire enabled discrete actions until nothing changes. Returns whether anything fired.

    Each iteration evaluates every enabled action against the same store
    and then applies all of them together. Continuous equations are
    re-evaluated after every iteration that changed something, so guards
    in the next iteration see consistent algebraic values.
    """
    fired = False
    iterations = 0
    while True:
        program = store.program()
        changes = program.collect()
        if not changes:
            return fired
        iterations += 1
        if iterations > max_iterations:
            paths = sorted({c[1].qualify(c[2]) for c in changes if c[0] != "terminate"})
            raise ModelError(f"non-convergent discrete behavior after {max_iterations} iterations (still changing: {', '.join(paths)})")
        program.apply(changes, events)
        fired = True
        store.program().plan.evaluate()

"""Live object instances and their creation/termination."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..errors import EvalError, ModelError
from ..syntax import ast
from ..syntax.ast import split_key
from ..values import ObjRef, Value, to_value
from .compiler import compile_expr


@dataclass(eq=False)
class ObjectInstance:
    id: int
    cls: str
    fields: dict[str, Value]
    deriv_order: dict[str, int]
    parent: int | None
    children: list[int] = field(default_factory=list)
    path: str = ""

    def qualify(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def chains(self) -> Iterator[tuple[str, int]]:
        for base, order in self.deriv_order.items():
            if order > 0:
                yield base, order


class ObjectStore:
    """The tree of live objects for one simulation run.

    ``version`` increases whenever the object structure or any object
    reference changes; compiled code for an older version is stale.
    """

    def __init__(self, model: Sequence[ast.ClassDef]) -> None:
        self.classes: dict[str, ast.ClassDef] = {}
        for c in model:
            if c.name in self.classes:
                raise ModelError(f"class {c.name!r} defined twice")
            self.classes[c.name] = c
        self.objects: dict[int, ObjectInstance] = {}
        self.root: int | None = None
        self.version = 0
        self.time = 0.0
        self._next_id = 0
        self._paths: set[str] = set()
        self._program = None
        self.frames_emitted = 0
        self.events_fired = 0

    @property
    def root_object(self) -> ObjectInstance:
        assert self.root is not None
        return self.objects[self.root]

    def get(self, ref: ObjRef) -> ObjectInstance:
        try:
            return self.objects[ref.id]
        except KeyError:
            raise EvalError(f"dangling object reference {ref}") from None

    def walk(self) -> Iterator[ObjectInstance]:
        """Depth-first traversal from the root, siblings in creation order."""
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            obj = self.objects[stack.pop()]
            yield obj
            stack.extend(reversed(obj.children))

    def program(self):
        from .program import Program

        if self._program is None or self._program.version != self.version:
            self._program = Program.compile(self)
        return self._program

    # -- structure changes ----------------------------------------------------

    def create(self, class_name: str, args: Sequence[Value], parent: ObjectInstance | None, binder: str = "") -> ObjectInstance:
        cls = self.classes.get(class_name)
        if cls is None:
            raise ModelError(f"unknown class {class_name!r}")
        if len(args) != len(cls.params):
            raise ModelError(f"class {class_name} takes {len(cls.params)} argument(s), got {len(args)}")
        oid = self._next_id
        self._next_id += 1
        if len(set(cls.params)) != len(cls.params):
            raise ModelError(f"class {class_name} has duplicate parameter names")
        path = "" if parent is None else parent.qualify(binder)
        if parent is not None and path in self._paths:
            path = f"{path}#{oid}"
        obj = ObjectInstance(oid, class_name, dict(zip(cls.params, (to_value(a) for a in args))), {}, None if parent is None else parent.id, path=path)
        for p in cls.params:
            obj.deriv_order[p] = 0
        self.objects[oid] = obj
        self._paths.add(path)
        if parent is None:
            self.root = oid
        else:
            parent.children.append(oid)
        self.version += 1
        try:
            self._initialize(obj, cls)
        except Exception:
            self._remove(obj)
            raise
        return obj

    def _initialize(self, obj: ObjectInstance, cls: ast.ClassDef) -> None:
        for decl in cls.privates:
            key = decl.key
            if key in obj.fields:
                raise ModelError(f"class {cls.name}: {key!r} declared twice")
            try:
                if isinstance(decl.init, ast.Create):
                    args = [compile_expr(a, obj, self)() for a in decl.init.args]
                    child = self.create(decl.init.class_name, args, obj, key)
                    obj.fields[key] = ObjRef(child.id)
                else:
                    obj.fields[key] = compile_expr(decl.init, obj, self)()
            except EvalError as exc:
                line = f" (line {decl.pos[0]})" if decl.pos else ""
                raise ModelError(f"class {cls.name}: initializer of {key!r}{line}: {exc}") from exc
            base, primes = split_key(key)
            obj.deriv_order[base] = max(obj.deriv_order.get(base, 0), primes)
        for base, order in obj.deriv_order.items():
            missing = [base + "'" * k for k in range(order) if base + "'" * k not in obj.fields]
            if missing:
                raise ModelError(f"class {cls.name}: {base + chr(39) * order!r} declared without {', '.join(missing)}")

    def terminate(self, oid: int) -> None:
        if oid == self.root:
            raise ModelError("root cannot be terminated")
        obj = self.objects.get(oid)
        if obj is None:
            raise EvalError(f"dangling object reference #{oid}")
        self._remove(obj)

    def _remove(self, obj: ObjectInstance) -> None:
        for cid in list(obj.children):
            if cid in self.objects:
                self._remove(self.objects[cid])
        if obj.parent is not None and obj.parent in self.objects:
            siblings = self.objects[obj.parent].children
            if obj.id in siblings:
                siblings.remove(obj.id)
        self.objects.pop(obj.id, None)
        self._paths.discard(obj.path)
        if self.root == obj.id:
            self.root = None
        self.version += 1


def instantiate(model: Sequence[ast.ClassDef], root_class: str, args: Sequence[object] = ()) -> ObjectStore:
    """Build a store holding a fresh instance of ``root_class`` and everything it creates."""
    store = ObjectStore(model)
    store.create(root_class, [to_value(a) for a in args], None)
    return store


def terminate(store: ObjectStore, ref: ObjRef | int) -> ObjectStore:
    store.terminate(ref.id if isinstance(ref, ObjRef) else ref)
    return store

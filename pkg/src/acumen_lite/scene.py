"""Shape extraction from ``_3D`` fields and the JSONL scene stream."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Union

from .errors import EvalError

SHAPE_FIELD = "_3D"

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class ShapeRecord:
    kind: str
    center: Vec3
    size: Union[float, tuple[float, float]]
    color: Vec3
    orientation: Vec3

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "center": list(self.center),
            "size": list(self.size) if isinstance(self.size, tuple) else self.size,
            "color": list(self.color),
            "orientation": list(self.orientation),
        }


@dataclass(frozen=True)
class SceneFrame:
    time: float
    shapes: tuple[ShapeRecord, ...]

    def to_json(self) -> dict:
        return {"time": self.time, "shapes": [s.to_json() for s in self.shapes]}


def _vec3(v: object, what: str, kind: str) -> Vec3:
    if type(v) is not tuple or len(v) != 3 or any(type(x) is not float for x in v):
        raise EvalError(f"{kind} {what} must be a vector of 3 reals, got {v!r}")
    return v  # type: ignore[return-value]


def _record(v: tuple) -> ShapeRecord:
    kind = v[0]
    if kind not in ("Sphere", "Cylinder"):
        raise EvalError(f"unknown shape kind {kind!r}")
    if len(v) != 5:
        raise EvalError(f"{kind} record needs 5 fields (kind, center, size, color, orientation), got {len(v)}")
    center = _vec3(v[1], "center", kind)
    size = v[2]
    if kind == "Sphere":
        if type(size) is not float:
            raise EvalError(f"Sphere radius must be a real, got {size!r}")
    elif type(size) is not tuple or len(size) != 2 or any(type(x) is not float for x in size):
        raise EvalError(f"Cylinder size must be [radius, length], got {size!r}")
    return ShapeRecord(kind, center, size, _vec3(v[3], "color", kind), _vec3(v[4], "orientation", kind))


def normalize_3d(value: object) -> list[ShapeRecord]:
    """Turn a ``_3D`` value into shape records.

    Both encodings are accepted: a single record whose first element is
    the kind string, or a vector of such records.
    """
    if type(value) is not tuple:
        raise EvalError(f"_3D must be a vector, got {value!r}")
    if value and type(value[0]) is str:
        return [_record(value)]
    shapes = []
    for item in value:
        if type(item) is not tuple or not item or type(item[0]) is not str:
            raise EvalError(f"_3D entry is not a shape record: {item!r}")
        shapes.append(_record(item))
    return shapes


def extract_scene(store) -> SceneFrame:
    """Collect shapes from every live object, depth first; objects without ``_3D`` contribute nothing."""
    shapes: list[ShapeRecord] = []
    for obj in store.walk():
        if SHAPE_FIELD in obj.fields:
            try:
                shapes.extend(normalize_3d(obj.fields[SHAPE_FIELD]))
            except EvalError as exc:
                raise EvalError(f"{obj.cls} ({obj.path or '<root>'}): {exc}") from None
    return SceneFrame(store.time, tuple(shapes))


class SceneWriter:
    """Writes one JSON object per frame to a text stream."""

    def __init__(self, stream: IO[str]) -> None:
        self.stream = stream

    def __call__(self, frame: SceneFrame) -> None:
        self.stream.write(json.dumps(frame.to_json()) + "\n")


def emit_scene(frames: Iterable[SceneFrame], sink: IO[str]) -> None:
    write = SceneWriter(sink)
    for frame in frames:
        write(frame)

"""Trace frames and their CSV / JSONL writers."""

from __future__ import annotations

import csv
import fnmatch
import json
from dataclasses import dataclass
from typing import IO, Sequence, Union

from ..values import flatten

Scalar = Union[float, str, bool]


@dataclass(frozen=True)
class TraceFrame:
    time: float
    entries: tuple[tuple[str, Scalar], ...]

    def as_dict(self) -> dict[str, Scalar]:
        return dict(self.entries)


def capture(store) -> TraceFrame:
    entries: list[tuple[str, Scalar]] = []
    for obj in store.walk():
        for key, value in obj.fields.items():
            entries.extend(flatten(value, obj.qualify(key)))
    return TraceFrame(store.time, tuple(entries))


def format_scalar(v: Scalar) -> str:
    if type(v) is float:
        return "%.17g" % v
    if type(v) is bool:
        return "true" if v else "false"
    return str(v)


class _Filtered:
    def __init__(self, patterns: Sequence[str] | None) -> None:
        self.patterns = list(patterns or [])

    def keep(self, path: str) -> bool:
        return not self.patterns or any(fnmatch.fnmatchcase(path, p) for p in self.patterns)


class CsvTraceWriter(_Filtered):
    """Buffers frames and writes them on :meth:`close`.

    Columns are the union of all paths seen, sorted, with ``time`` first;
    cells are empty where an object did not exist in a frame.
    """

    def __init__(self, stream: IO[str], patterns: Sequence[str] | None = None) -> None:
        super().__init__(patterns)
        self.stream = stream
        self.rows: list[tuple[float, dict[str, Scalar]]] = []

    def __call__(self, frame: TraceFrame) -> None:
        self.rows.append((frame.time, {p: v for p, v in frame.entries if self.keep(p)}))

    def close(self) -> None:
        columns = sorted({p for _, row in self.rows for p in row})
        w = csv.writer(self.stream, lineterminator="\n")
        w.writerow(["time", *columns])
        for t, row in self.rows:
            w.writerow([format_scalar(t)] + [format_scalar(row[c]) if c in row else "" for c in columns])
        self.stream.flush()


class JsonlTraceWriter(_Filtered):
    def __init__(self, stream: IO[str], patterns: Sequence[str] | None = None) -> None:
        super().__init__(patterns)
        self.stream = stream

    def __call__(self, frame: TraceFrame) -> None:
        data = {p: v for p, v in frame.entries if self.keep(p)}
        self.stream.write(json.dumps({"time": frame.time, "vars": data}) + "\n")

    def close(self) -> None:
        self.stream.flush()

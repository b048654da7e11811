"""Catalog of the bundled ``.acm`` models plus closed-form helpers used to check them.

Each fixture file is self-contained: it carries every class it needs, so
``acumen-lite run`` works on it directly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..engine.compiler import eval_constants
from ..syntax import ast, parse_source

MODELS_DIR = Path(__file__).with_name("models")

VERBATIM = "verbatim"
CORRECTED = "corrected"
DERIVED = "derived-from-prose"

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    topic: str
    fidelity: str
    root: str
    args: tuple = ()
    symbols: dict[str, str] = field(default_factory=dict)
    note: str = ""

    def source(self) -> str:
        return self.path.read_text(encoding="utf-8")

    def model(self) -> list[ast.ClassDef]:
        return _parse_cached(self.path)


@lru_cache(maxsize=None)
def _parse_cached(path: Path) -> list[ast.ClassDef]:
    return parse_source(path.read_text(encoding="utf-8"))


def _sym(cls: str, *names: str) -> dict[str, str]:
    return {n: f"{cls}.{n}" for n in names}


# name -> (topic, symbol map); everything else comes from the fixture header.
_CATALOG: dict[str, tuple[str, dict[str, str]]] = {
    "sphere": ("visualization", _sym("sphere", "m", "D", "p")),
    "moving_sphere": ("visualization", _sym("moving_sphere", "m", "D", "s", "t")),
    "display_bar": ("visualization", _sym("display_bar", "v", "c", "D")),
    "cylinder": ("visualization", _sym("cylinder", "D", "p", "q", "alpha", "theta", "length")),
    "mass_1d": ("mechanics", _sym("mass_1d", "m", "D", "p", "f", "e_k", "s")),
    "mass": ("mechanics", _sym("mass", "m", "D", "p", "f", "e_k", "s")),
    "spring": ("mechanics", _sym("spring", "k", "l0", "D", "dl", "e_p")),
    "spring_fixed": ("mechanics", _sym("spring_fixed", "k", "l0", "D", "dl", "e_p")),
    "bouncing_ball": ("impacts", {**_sym("bouncing_ball", "m", "bk", "bp", "bt"), "p": "mass_1d.p", "e_k": "mass_1d.e_k"}),
    "example_3": ("composition", _sym("spring", "k", "l0", "e_p")),
    "controlled_example_3": ("control", _sym("force_controller_pd", "g", "v", "f", "s", "k_p", "k_d")),
    "force_controller_p": ("control", _sym("force_controller_p", "k_p", "g", "v", "f")),
    "force_controller_pd": ("control", _sym("force_controller_pd", "k_p", "k_d", "g", "v", "s", "f")),
    "force_controller_pid": ("control", _sym("force_controller_pid", "k_p", "k_i", "k_d", "g", "v", "s", "f", "i")),
    "force_disturbance": ("disturbances", _sym("force_disturbance", "k", "t", "f")),
    "dumbbell": ("rigid body", _sym("dumbbell", "D", "p", "q")),
    "rod": ("rigid body", _sym("rod", "m", "D", "p", "q", "length", "axis", "core", "fp", "fq",
                               "fp_axis", "fp_orth", "fq_axis", "fq_orth", "sp", "sq")),
    "force_controller_pid_d": ("discretization", _sym("force_controller_pid_d", "k_p", "k_i", "k_d", "g", "v",
                                                      "s", "f", "i", "t", "period")),
    "quantizer": ("quantization", _sym("quantizer", "u", "q")),
}


def read_header(source: str) -> dict[str, str]:
    """Leading ``// key: value`` comment lines of a model file.

    The first line is ``// <name>: <description>`` and is returned under
    ``name`` and ``description``.
    """
    out: dict[str, str] = {}
    for i, line in enumerate(source.splitlines()):
        m = re.match(r"//\s*([\w-]+)\s*:\s*(.*?)\s*$", line)
        if not m:
            break
        if i == 0:
            out["name"], out["description"] = m.groups()
        else:
            out[m.group(1)] = m.group(2)
    return out


def run_directive(source: str) -> tuple[str, str] | None:
    """The ``(root class, argument text)`` a header's ``// run: C (args)`` line names."""
    line = read_header(source).get("run")
    if not line:
        return None
    m = re.fullmatch(r"(\w+)\s*(?:\((.*)\))?", line)
    if not m:
        raise ValueError(f"malformed run directive {line!r}")
    return m.group(1), m.group(2) or ""


def load_corpus() -> list[CorpusEntry]:
    entries = []
    for name, (topic, symbols) in _CATALOG.items():
        path = MODELS_DIR / f"{name}.acm"
        if not path.is_file():
            raise FileNotFoundError(f"corpus fixture missing: {path}")
        source = path.read_text(encoding="utf-8")
        header = read_header(source)
        root, args = run_directive(source) or (_parse_cached(path)[-1].name, "")
        entries.append(CorpusEntry(name, path, topic, header["fidelity"], root, tuple(eval_constants(args)),
                                   symbols, header.get("description", "")))
    return entries


def get_entry(name: str) -> CorpusEntry:
    for entry in load_corpus():
        if entry.name == name:
            return entry
    raise KeyError(name)


def rod_reference(fp, fq, m: float, axis, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form rod accelerations ``(core'', axis'')`` for end forces ``fp`` and ``fq``.

    Each force is split into a part along the axis and a part orthogonal
    to it; the sum drives translation and the orthogonal difference
    drives rotation.
    """
    if m == 0:
        raise ValueError("rod mass must be nonzero")
    if length == 0:
        raise ValueError("rod length must be nonzero")
    fp = np.asarray(fp, dtype=float)
    fq = np.asarray(fq, dtype=float)
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    fp_orth = fp - np.dot(fp, axis) * axis / n
    fq_orth = fq - np.dot(fq, axis) * axis / n
    return (fp + fq) / m, 2 * (fp_orth - fq_orth) / (m * length)


def quantize(v: float, quantum: float) -> float:
    """Round ``v`` down to a multiple of ``quantum``."""
    if not quantum > 0:
        raise ValueError(f"quantum must be positive, got {quantum}")
    return math.floor(v / quantum) * quantum

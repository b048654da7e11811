from __future__ import annotations

import math

import pytest

from acumen_lite.corpus import get_entry, load_corpus
from acumen_lite.engine import SimConfig, simulate
from acumen_lite.syntax import parse_source


class Run:
    """Everything one simulation emitted, kept in memory."""

    def __init__(self, model, root, args=(), config=SimConfig()):
        self.frames = []
        self.times = []
        self.scenes = []
        self.events = []
        self.store = simulate(model, root, args, config, trace=self._trace, scene=self.scenes.append,
                              events=self.events.append)

    def _trace(self, frame):
        self.times.append(frame.time)
        self.frames.append(frame.as_dict())

    def series(self, path):
        return [f[path] for f in self.frames]

    def vec(self, frame, path, n=3):
        return [frame[f"{path}[{i}]"] for i in range(n)]


def run_entry(name, **config):
    e = get_entry(name)
    return Run(e.model(), e.root, e.args, SimConfig(**config))


def run_source(text, root=None, args=(), **config):
    model = parse_source(text)
    return Run(model, root or model[-1].name, args, SimConfig(**config))


def vnorm(v):
    return math.sqrt(sum(x * x for x in v))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


# Acceptance lines are collected here and printed after the run.
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abc")), k)):
        ok, desc = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {desc}")

"""The hybrid simulation loop."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import AcumenError, SimulationError
from ..scene import SceneFrame, extract_scene
from ..syntax import ast
from .program import DiscreteEvent, discrete_fixpoint
from .store import ObjectStore, instantiate
from .trace import TraceFrame, capture


@dataclass(frozen=True)
class SimConfig:
    start_time: float = 0.0
    end_time: float = 10.0
    time_step: float = 2.0 ** -6
    max_discrete_iterations: int = 1000

    def __post_init__(self) -> None:
        if not self.time_step > 0:
            raise ValueError(f"time step must be positive, got {self.time_step}")
        if not self.end_time > self.start_time:
            raise ValueError(f"end time {self.end_time} must exceed start time {self.start_time}")
        if self.max_discrete_iterations < 1:
            raise ValueError("max_discrete_iterations must be at least 1")


def simulate(
    model: Sequence[ast.ClassDef],
    root_class: str,
    args: Sequence[object] = (),
    config: SimConfig = SimConfig(),
    trace: Callable[[TraceFrame], None] | None = None,
    scene: Callable[[SceneFrame], None] | None = None,
    events: Callable[[DiscreteEvent], None] | None = None,
) -> ObjectStore:
    """Run ``root_class`` from ``start_time`` until ``end_time`` and return the final store.

    Every emitted frame is taken after the discrete fixpoint of its
    instant, with algebraic variables consistent with the state. Time is
    computed as ``start + k*h`` so it never accumulates rounding.
    """
    try:
        store = instantiate(model, root_class, args)
    except AcumenError as exc:
        raise SimulationError(str(exc), config.start_time, exc) from exc
    h = config.time_step
    store.time = config.start_time

    def emit() -> None:
        if trace is not None:
            trace(capture(store))
        if scene is not None:
            scene(extract_scene(store))
        store.frames_emitted += 1

    try:
        store.program().plan.evaluate()
        discrete_fixpoint(store, config.max_discrete_iterations, events)
        emit()
        k = 0
        while store.time < config.end_time:
            store.program().integrate(h)
            k += 1
            store.time = config.start_time + k * h
            store.program().plan.evaluate()
            discrete_fixpoint(store, config.max_discrete_iterations, events)
            emit()
    except SimulationError:
        raise
    except AcumenError as exc:
        raise SimulationError(str(exc), store.time, exc) from exc
    return store

"""Instantiation, equation planning, discrete fixpoint and Euler integration."""

from .program import DiscreteEvent, EquationPlan, continuous_step, discrete_fixpoint, plan_continuous
from .simulate import SimConfig, simulate
from .store import ObjectInstance, ObjectStore, instantiate, terminate
from .trace import CsvTraceWriter, JsonlTraceWriter, TraceFrame, capture

__all__ = [
    "CsvTraceWriter", "DiscreteEvent", "EquationPlan", "JsonlTraceWriter", "ObjectInstance",
    "ObjectStore", "SimConfig", "TraceFrame", "capture", "continuous_step", "discrete_fixpoint",
    "instantiate", "plan_continuous", "simulate", "terminate",
]

"""acumen-lite: an interpreter and batch simulator for a small hybrid modeling language."""

from .check import Diagnostic, check_model, check_source
from .engine import SimConfig, instantiate, simulate
from .errors import AcumenError, EvalError, LexError, ModelError, NumericError, ParseError, SimulationError
from .scene import ShapeRecord, SceneFrame, extract_scene, normalize_3d
from .syntax import lex, parse_expr, parse_model, parse_source, pretty_print

__version__ = "0.1.0"

__all__ = [
    "AcumenError", "Diagnostic", "EvalError", "LexError", "ModelError", "NumericError", "ParseError",
    "SceneFrame", "ShapeRecord", "SimConfig", "SimulationError", "check_model", "check_source",
    "extract_scene", "instantiate", "lex", "normalize_3d", "parse_expr", "parse_model", "parse_source",
    "pretty_print", "simulate",
]

"""Text front end: model and script syntax, interpreter, snapshots."""

from .interp import (
    Interpreter,
    ModelError,
    ScriptAssertionFailed,
    ScriptError,
    load_model,
    run,
    run_script,
)
from .render import format_type, format_value, world_declarations
from .snapshot import declarations_of, dump_snapshot, snapshot_dict
from .syntax import ModelSyntaxError, UnboundVariable, parse_model, parse_script, parse_type, tokenize

__all__ = [
    "Interpreter",
    "ModelError",
    "ModelSyntaxError",
    "ScriptAssertionFailed",
    "ScriptError",
    "UnboundVariable",
    "declarations_of",
    "dump_snapshot",
    "format_type",
    "format_value",
    "load_model",
    "parse_model",
    "parse_script",
    "parse_type",
    "run",
    "run_script",
    "snapshot_dict",
    "tokenize",
    "world_declarations",
]

"""Interleaved service behaviors: validation, simulation, exploration, audit."""

from ._core import (
    IostdError,
    audit,
    check_serializability,
    enabledness,
    explore,
    export_machine,
    format_behavior,
    replay,
    run,
    validate,
)

__all__ = [
    "IostdError",
    "audit",
    "check_serializability",
    "enabledness",
    "explore",
    "export_machine",
    "format_behavior",
    "replay",
    "run",
    "validate",
]

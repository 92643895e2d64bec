"""Genetic-algorithm synthesis of programs for an eight-instruction tape language."""

from ._core import (
    CheckpointError,
    ConfigError,
    DomainError,
    EvolveResult,
    ExecReport,
    ParseError,
    TaskFileError,
    Termination,
    decode,
    encode,
    evaluate,
    evolve,
    resume,
    run,
    task_info,
    task_names,
)

__all__ = [
    "CheckpointError",
    "ConfigError",
    "DomainError",
    "EvolveResult",
    "ExecReport",
    "ParseError",
    "TaskFileError",
    "Termination",
    "decode",
    "encode",
    "evaluate",
    "evolve",
    "resume",
    "run",
    "task_info",
    "task_names",
]

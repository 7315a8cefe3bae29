"""Particle swarm synthesis of quantum circuits for the quantum MaxOne problem."""

from .circuit import (
    DEFAULT_GATE_SET,
    Circuit,
    ConfigError,
    GateKind,
    Instruction,
    random_instruction,
)
from .fitness import FitnessKind, evaluate, evaluate_fe1, evaluate_fe2
from .qasm import QasmError, emit_qasm, parse_qasm
from .simulator import apply_instruction, probabilities

__all__ = [
    "DEFAULT_GATE_SET",
    "Circuit",
    "ConfigError",
    "FitnessKind",
    "GateKind",
    "Instruction",
    "QasmError",
    "apply_instruction",
    "emit_qasm",
    "evaluate",
    "evaluate_fe1",
    "evaluate_fe2",
    "parse_qasm",
    "probabilities",
    "random_instruction",
]

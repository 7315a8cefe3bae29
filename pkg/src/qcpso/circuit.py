"""Gate instructions, circuits and random instruction generation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TAU = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid problem or run configuration."""


class GateKind(enum.Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    CX = "cx"
    RX = "rx"
    RY = "ry"
    RZ = "rz"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CX else 1

    @property
    def parameterized(self) -> bool:
        return self in _ROTATIONS

    @property
    def can_flip(self) -> bool:
        """True if the gate can move amplitude from |0> to |1> on its own."""
        return self in _FLIPPERS


_ROTATIONS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})
_FLIPPERS = frozenset({GateKind.X, GateKind.Y, GateKind.RX, GateKind.RY})
_ORDER = {kind: i for i, kind in enumerate(GateKind)}

DEFAULT_GATE_SET = frozenset(GateKind)


def normalize_gate_set(gate_set: Iterable[GateKind]) -> tuple[GateKind, ...]:
    """Deduplicate and sort into declaration order, so draws never depend on set iteration."""
    kinds = tuple(sorted(set(gate_set), key=_ORDER.__getitem__))
    if not kinds:
        raise ConfigError("gate set must not be empty")
    return kinds


def parse_gate_set(text: str) -> frozenset[GateKind]:
    """Parse a comma separated gate list such as ``"h,x,cx,ry"``."""
    kinds = set()
    for name in text.split(","):
        name = name.strip().lower()
        if not name:
            continue
        try:
            kinds.add(GateKind(name))
        except ValueError:
            raise ConfigError(f"unknown gate {name!r}") from None
    if not kinds:
        raise ConfigError("gate set must not be empty")
    return frozenset(kinds)


def check_problem_gate_set(gate_set: Iterable[GateKind], num_qubits: int) -> tuple[GateKind, ...]:
    kinds = normalize_gate_set(gate_set)
    if not any(k.can_flip for k in kinds):
        raise ConfigError("gate set needs at least one of x, y, rx, ry to reach the all-ones state")
    if all(k.arity > num_qubits for k in kinds):
        raise ConfigError(f"no gate in the set fits on {num_qubits} qubit(s)")
    return kinds


@dataclass(frozen=True)
class Instruction:
    kind: GateKind
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(targets) != self.kind.arity:
            raise ValueError(f"{self.kind.value} takes {self.kind.arity} qubit(s), got {targets}")
        if any(t < 0 for t in targets):
            raise ValueError(f"negative qubit index in {targets}")
        if len(set(targets)) != len(targets):
            raise ValueError(f"control and target must differ, got {targets}")
        if self.kind.parameterized:
            if self.angle is None:
                raise ValueError(f"{self.kind.value} needs an angle")
            angle = float(self.angle)
            if not 0.0 <= angle < TAU:
                raise ValueError(f"angle {angle!r} outside [0, 2pi)")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")

    def __str__(self) -> str:
        args = ",".join(f"q{t}" for t in self.targets)
        if self.angle is None:
            return f"{self.kind.value} {args}"
        return f"{self.kind.value}({self.angle:.6g}) {args}"


@dataclass(frozen=True)
class Circuit:
    """An instruction body on ``num_qubits`` qubits.

    The Hadamard layer over every qubit is not part of ``body``; the simulator
    applies it before the body and the QASM writer emits it explicitly.
    """

    num_qubits: int
    body: tuple[Instruction, ...] = ()

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        body = tuple(self.body)
        object.__setattr__(self, "body", body)
        for instr in body:
            if max(instr.targets) >= self.num_qubits:
                raise ValueError(f"{instr} addresses a qubit outside q[0..{self.num_qubits - 1}]")

    def __len__(self) -> int:
        return len(self.body)


def wrap_angle(theta: float) -> float:
    """Reduce an angle into [0, 2pi)."""
    theta = theta % TAU
    # x % TAU can round up to TAU for tiny negative x
    return 0.0 if theta >= TAU else theta


def random_instruction(
    num_qubits: int, gate_set: Iterable[GateKind], rng: np.random.Generator
) -> Instruction:
    """Draw one instruction: kind uniform over the usable gate set, targets uniform, angle uniform."""
    if num_qubits < 1:
        raise ConfigError("num_qubits must be at least 1")
    kinds = [k for k in normalize_gate_set(gate_set) if k.arity <= num_qubits]
    if not kinds:
        raise ConfigError(f"no gate in the set fits on {num_qubits} qubit(s)")
    kind = kinds[int(rng.integers(len(kinds)))] if len(kinds) > 1 else kinds[0]
    if kind.arity == 2:
        control = int(rng.integers(num_qubits))
        target = int(rng.integers(num_qubits - 1))
        if target >= control:
            target += 1
        targets: tuple[int, ...] = (control, target)
    else:
        targets = (int(rng.integers(num_qubits)),)
    angle = wrap_angle(float(rng.uniform(0.0, TAU))) if kind.parameterized else None
    return Instruction(kind, targets, angle)


def random_body(
    length: int, num_qubits: int, gate_set: Iterable[GateKind], rng: np.random.Generator
) -> tuple[Instruction, ...]:
    kinds = normalize_gate_set(gate_set)
    return tuple(random_instruction(num_qubits, kinds, rng) for _ in range(length))


def inverse(instr: Instruction) -> Instruction:
    if instr.kind.parameterized:
        return Instruction(instr.kind, instr.targets, wrap_angle(-instr.angle))
    return instr


def window(body: Sequence[Instruction], max_len: int) -> tuple[Instruction, ...]:
    """Keep the most recent ``max_len`` instructions."""
    body = tuple(body)
    return body[-max_len:] if len(body) > max_len else body

"""Dense statevector simulation.

Qubit ``q`` is bit ``q`` of the basis-state index (q[0] least significant).
Every gate touches each amplitude a constant number of times, so simulation
cost is O(2**n) per instruction.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .circuit import Circuit, GateKind, Instruction

_S = 1.0 / math.sqrt(2.0)

FIXED_MATRICES = {
    GateKind.H: np.array([[_S, _S], [_S, -_S]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


def gate_matrix(kind: GateKind, angle: float | None = None) -> np.ndarray:
    """2x2 unitary of a single-qubit gate."""
    if kind in FIXED_MATRICES:
        return FIXED_MATRICES[kind]
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array([[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex)
    raise ValueError(f"{kind.value} is not a single-qubit gate")


@lru_cache(maxsize=4096)
def _flip_permutation(num_qubits: int, target: int, control: int | None) -> np.ndarray:
    index = np.arange(1 << num_qubits)
    flipped = index ^ (1 << target)
    if control is None:
        return flipped
    return np.where(index & (1 << control), flipped, index)


def zero_state(num_qubits: int) -> np.ndarray:
    state = np.zeros(1 << num_qubits, dtype=complex)
    state[0] = 1.0
    return state


def uniform_state(num_qubits: int) -> np.ndarray:
    """The result of the Hadamard layer on |0...0>."""
    state = zero_state(num_qubits)
    for q in range(num_qubits):
        state = _apply_1q(state, FIXED_MATRICES[GateKind.H], q, num_qubits)
    return state


def _apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    view = state.reshape(1 << (num_qubits - qubit - 1), 2, 1 << qubit)
    lo, hi = view[:, 0, :], view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = matrix[0, 0] * lo + matrix[0, 1] * hi
    out[:, 1, :] = matrix[1, 0] * lo + matrix[1, 1] * hi
    return out.reshape(-1)


@lru_cache(maxsize=1 << 16)
def _kernel(instr: Instruction, num_qubits: int) -> tuple[np.ndarray, np.ndarray | None, np.ndarray | None]:
    """Precomputed update ``new = diag * state + off * state[perm]`` for one instruction.

    ``diag`` and ``off`` are None when the update is a pure permutation.
    """
    if instr.kind is GateKind.CX:
        control, target = instr.targets
        return _flip_permutation(num_qubits, target, control), None, None
    qubit = instr.targets[0]
    perm = _flip_permutation(num_qubits, qubit, None)
    if instr.kind is GateKind.X:
        return perm, None, None
    matrix = gate_matrix(instr.kind, instr.angle)
    bit = (np.arange(1 << num_qubits) >> qubit) & 1
    diag = np.where(bit, matrix[1, 1], matrix[0, 0])
    off = np.where(bit, matrix[1, 0], matrix[0, 1])
    if not off.any():
        return perm, diag, None
    return perm, diag, off


# above this size the cached per-instruction vectors cost more memory than they save time
_KERNEL_MAX_QUBITS = 10


def _apply(state: np.ndarray, instr: Instruction, num_qubits: int) -> np.ndarray:
    if num_qubits > _KERNEL_MAX_QUBITS:
        return _apply_direct(state, instr, num_qubits)
    perm, diag, off = _kernel(instr, num_qubits)
    if diag is None:
        return state[perm]
    if off is None:
        return diag * state
    return diag * state + off * state[perm]


def _apply_direct(state: np.ndarray, instr: Instruction, num_qubits: int) -> np.ndarray:
    if instr.kind is GateKind.CX:
        control, target = instr.targets
        return state[_flip_permutation(num_qubits, target, control)]
    matrix = gate_matrix(instr.kind, instr.angle)
    return _apply_1q(state, matrix, instr.targets[0], num_qubits)


def apply_instruction(state: np.ndarray, instr: Instruction) -> np.ndarray:
    """Return a new statevector with ``instr`` applied; ``state`` is left untouched."""
    return _apply(np.asarray(state, dtype=complex), instr, state.size.bit_length() - 1)


def statevector(circuit: Circuit) -> np.ndarray:
    """Amplitudes after the Hadamard layer followed by the circuit body."""
    n = circuit.num_qubits
    state = _uniform(n)
    for instr in circuit.body:
        state = _apply(state, instr, n)
    return state.copy() if not circuit.body else state


@lru_cache(maxsize=None)
def _uniform(num_qubits: int) -> np.ndarray:
    state = uniform_state(num_qubits)
    state.setflags(write=False)
    return state


def probabilities(circuit: Circuit) -> np.ndarray:
    """Basis-state probabilities, index k holding the probability of bitstring k."""
    state = statevector(circuit)
    probs = state.real**2 + state.imag**2
    return probs

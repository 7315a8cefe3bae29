"""MaxOne fitness evaluations over a basis-state probability distribution.

A basis state's value is its integer index, so on n qubits the all-ones
state scores 2**n - 1.
"""

from __future__ import annotations

import enum

import numpy as np

from .circuit import Circuit
from .simulator import probabilities


class FitnessKind(enum.Enum):
    FE1 = "fe1"
    FE2 = "fe2"


def _state_values(size: int) -> np.ndarray:
    return np.arange(size, dtype=float)


def best_weighted_state(probs: np.ndarray) -> int:
    """Index k maximising probs[k] * k; ties go to the larger index."""
    weighted = np.asarray(probs, dtype=float) * _state_values(len(probs))
    return len(weighted) - 1 - int(np.argmax(weighted[::-1]))


def evaluate_fe1(probs: np.ndarray) -> float:
    """Probability-weighted value of the single best state, ``max_k p_k * k``."""
    probs = np.asarray(probs, dtype=float)
    k = best_weighted_state(probs)
    return _clip(float(probs[k]) * k, len(probs))


def evaluate_fe2(probs: np.ndarray) -> float:
    """Expected state value, ``sum_k p_k * k``."""
    probs = np.asarray(probs, dtype=float)
    return _clip(float(np.dot(probs, _state_values(len(probs)))), len(probs))


def _clip(value: float, size: int) -> float:
    # rounding in the simulator can leave the total probability a few ulps above 1
    return min(max(value, 0.0), float(size - 1))


_EVALUATORS = {FitnessKind.FE1: evaluate_fe1, FitnessKind.FE2: evaluate_fe2}


def evaluate(kind: FitnessKind, probs: np.ndarray) -> float:
    return _EVALUATORS[kind](probs)


def circuit_fitness(circuit: Circuit, kind: FitnessKind) -> float:
    return evaluate(kind, probabilities(circuit))

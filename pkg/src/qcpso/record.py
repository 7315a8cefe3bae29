"""Per-run statistics shared by the PSO and GA drivers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit

SEED_MASK = (1 << 64) - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent random stream for ``(seed, *key)``; the same key always gives the same stream."""
    return np.random.default_rng([seed & SEED_MASK, *key])


def iteration_stats(fitnesses: Sequence[float]) -> tuple[float, float, float]:
    """Return ``(worst, avg, best)`` of a population's fitness values."""
    values = [float(v) for v in fitnesses]
    if not values:
        raise ValueError("iteration_stats needs at least one fitness value")
    worst, best = min(values), max(values)
    avg = math.fsum(values) / len(values)
    return worst, min(max(avg, worst), best), best


@dataclass(frozen=True)
class IterationRow:
    iteration: int
    worst: float
    avg: float
    best: float
    gbest: float
    weight: float | None = None


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    config: dict[str, str]
    rows: tuple[IterationRow, ...]
    particle_fitness: tuple[tuple[float, ...], ...]
    best_circuit: Circuit
    best_fitness: float
    initial_best: float
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.config["seed"])

    @property
    def iterations_to_best(self) -> int:
        """Number of iterations until the final best was first held (0 if the initial population had it)."""
        if self.initial_best >= self.best_fitness:
            return 0
        for row in self.rows:
            if row.gbest >= self.best_fitness:
                return row.iteration + 1
        return len(self.rows)

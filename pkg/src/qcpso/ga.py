"""Generational genetic algorithm over the same instruction-list encoding as the swarm."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .circuit import (
    DEFAULT_GATE_SET,
    Circuit,
    ConfigError,
    GateKind,
    Instruction,
    check_problem_gate_set,
    random_body,
    random_instruction,
)
from .fitness import FitnessKind, circuit_fitness
from .record import IterationRow, RunRecord, iteration_stats, substream

_GA_STREAM = 2


@dataclass(frozen=True)
class Chromosome:
    genes: tuple[Instruction, ...]
    fitness: float | None = None


@dataclass(frozen=True)
class GaConfig:
    population: int = 50
    generations: int = 30
    tournament_size: int = 3
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    elitism: int = 1
    num_qubits: int = 5
    fitness_kind: FitnessKind = FitnessKind.FE2
    gate_set: frozenset[GateKind] = DEFAULT_GATE_SET
    max_body_len: int = 64
    init_len_range: tuple[int, int] = (5, 20)
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "gate_set", frozenset(self.gate_set))
        object.__setattr__(self, "init_len_range", tuple(self.init_len_range))
        for name in ("population", "generations", "tournament_size", "num_qubits", "max_body_len"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not 0 <= self.elitism < self.population:
            raise ConfigError("elitism must be non-negative and smaller than the population")
        lo, hi = self.init_len_range
        if not 1 <= lo <= hi <= self.max_body_len:
            raise ConfigError(
                f"init_len_range {self.init_len_range} must lie within [1, max_body_len={self.max_body_len}]"
            )
        check_problem_gate_set(self.gate_set, self.num_qubits)

    def describe(self) -> dict[str, str]:
        return {
            "algorithm": "ga",
            "population": str(self.population),
            "generations": str(self.generations),
            "tournament_size": str(self.tournament_size),
            "crossover": "single-point",
            "crossover_rate": repr(float(self.crossover_rate)),
            "mutation": "per-gene-reroll",
            "mutation_rate": repr(float(self.mutation_rate)),
            "elitism": str(self.elitism),
            "num_qubits": str(self.num_qubits),
            "fitness": self.fitness_kind.value,
            "gate_set": ",".join(k.value for k in GateKind if k in self.gate_set),
            "max_body_len": str(self.max_body_len),
            "init_len_min": str(self.init_len_range[0]),
            "init_len_max": str(self.init_len_range[1]),
            "seed": str(self.seed),
        }


def splice(
    a: Sequence[Instruction], b: Sequence[Instruction], cut_a: int, cut_b: int, max_len: int | None = None
) -> tuple[tuple[Instruction, ...], tuple[Instruction, ...]]:
    """Swap the tails of ``a`` and ``b`` after the given cut points."""
    a, b = tuple(a), tuple(b)
    first = a[:cut_a] + b[cut_b:]
    second = b[:cut_b] + a[cut_a:]
    if max_len is not None:
        first, second = first[:max_len], second[:max_len]
    return first, second


def crossover(
    a: Chromosome, b: Chromosome, rng: np.random.Generator, max_len: int | None = None
) -> tuple[Chromosome, Chromosome]:
    cut_a = int(rng.integers(len(a.genes) + 1))
    cut_b = int(rng.integers(len(b.genes) + 1))
    first, second = splice(a.genes, b.genes, cut_a, cut_b, max_len)
    return Chromosome(first), Chromosome(second)


def mutate(
    c: Chromosome, rate: float, rng: np.random.Generator, num_qubits: int, gate_set: Iterable[GateKind]
) -> Chromosome:
    """Re-roll each gene independently with probability ``rate``."""
    if rate <= 0.0 or not c.genes:
        return c
    hits = rng.random(len(c.genes)) < rate
    if not hits.any():
        return c
    gate_set = tuple(gate_set)
    genes = tuple(
        random_instruction(num_qubits, gate_set, rng) if hit else gene for gene, hit in zip(c.genes, hits)
    )
    return Chromosome(genes)


def tournament_select(pop: Sequence[Chromosome], k: int, rng: np.random.Generator) -> Chromosome:
    if not pop:
        raise ValueError("cannot select from an empty population")
    if k < 1:
        raise ValueError("tournament size must be at least 1")
    draws = rng.integers(len(pop), size=k)
    winner = pop[draws[0]]
    for i in draws[1:]:
        if pop[i].fitness > winner.fitness:
            winner = pop[i]
    return winner


def _evaluate(c: Chromosome, cfg: GaConfig) -> Chromosome:
    fit = circuit_fitness(Circuit(cfg.num_qubits, c.genes), cfg.fitness_kind)
    return replace(c, fitness=fit)


def _breed(pop: Sequence[Chromosome], cfg: GaConfig, rng: np.random.Generator) -> list[Chromosome]:
    order = sorted(range(len(pop)), key=lambda i: -pop[i].fitness)
    nxt = [pop[i] for i in order[: cfg.elitism]]
    while len(nxt) < cfg.population:
        a = tournament_select(pop, cfg.tournament_size, rng)
        b = tournament_select(pop, cfg.tournament_size, rng)
        if rng.random() < cfg.crossover_rate:
            a, b = crossover(a, b, rng, cfg.max_body_len)
        for child in (a, b):
            if len(nxt) < cfg.population:
                nxt.append(mutate(child, cfg.mutation_rate, rng, cfg.num_qubits, cfg.gate_set))
    return nxt


def run_ga(cfg: GaConfig) -> RunRecord:
    rng = substream(cfg.seed, _GA_STREAM)
    lo, hi = cfg.init_len_range
    pop = [
        _evaluate(Chromosome(random_body(int(rng.integers(lo, hi + 1)), cfg.num_qubits, cfg.gate_set, rng)), cfg)
        for _ in range(cfg.population)
    ]
    champion = max(pop, key=lambda c: c.fitness)
    initial_best = champion.fitness
    rows = []
    per_individual = []
    for gen in range(cfg.generations):
        pop = [c if c.fitness is not None else _evaluate(c, cfg) for c in _breed(pop, cfg, rng)]
        fits = [c.fitness for c in pop]
        leader = max(pop, key=lambda c: c.fitness)
        if leader.fitness > champion.fitness:
            champion = leader
        worst, avg, best = iteration_stats(fits)
        rows.append(IterationRow(gen, worst, avg, best, champion.fitness, None))
        per_individual.append(tuple(fits))
    return RunRecord(
        algorithm="ga",
        config=cfg.describe(),
        rows=tuple(rows),
        particle_fitness=tuple(per_individual),
        best_circuit=Circuit(cfg.num_qubits, champion.genes),
        best_fitness=champion.fitness,
        initial_best=initial_best,
    )

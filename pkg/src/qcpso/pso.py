"""Particle swarm optimisation over instruction lists.

A position is a circuit body. A velocity is the list of instructions that was
appended to the previous position to reach the current one, so a position
update is concatenation followed by the length cap::

    V(t) = sample(V(t-1), w_t) ++ sample(pbest, c1) ++ sample(gbest, c2)
    x(t) = x(t-1) ++ V(t)

``sample`` draws without replacement and keeps the donor's order. The inertia
weight is a fraction of the previous velocity's length; ``c1`` and ``c2`` are
absolute instruction counts, clamped to the donor length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from .circuit import (
    DEFAULT_GATE_SET,
    Circuit,
    ConfigError,
    GateKind,
    Instruction,
    check_problem_gate_set,
    random_body,
    window,
)
from .fitness import FitnessKind, circuit_fitness
from .record import IterationRow, RunRecord, iteration_stats, substream

Body = tuple[Instruction, ...]

_INIT_STREAM = 0
_STEP_STREAM = 1


@dataclass(frozen=True)
class Constant:
    w: float = 1.0


@dataclass(frozen=True)
class TimeVarying:
    """Inertia weight falling linearly from ``w1`` at the first iteration to ``w2`` at the last."""

    w1: float = 1.0
    w2: float = 0.3


WeightSchedule = Union[Constant, TimeVarying]


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def schedule_weight(schedule: WeightSchedule, t: int, t_max: int) -> float:
    if not 0 <= t <= t_max or t_max < 1:
        raise ValueError(f"need 0 <= t <= t_max and t_max >= 1, got t={t}, t_max={t_max}")
    if isinstance(schedule, Constant):
        return _clamp01(schedule.w)
    return _clamp01((schedule.w1 - schedule.w2) * ((t_max - t) / t_max) + schedule.w2)


def round_count(x: float) -> int:
    """Round half away from zero, for non-negative sample sizes."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SwarmConfig:
    num_particles: int = 50
    num_iterations: int = 30
    num_qubits: int = 5
    c1: float = 1.5
    c2: float = 4.0
    weight_schedule: WeightSchedule = field(default_factory=Constant)
    fitness_kind: FitnessKind = FitnessKind.FE2
    gate_set: frozenset[GateKind] = DEFAULT_GATE_SET
    max_body_len: int = 64
    init_len_range: tuple[int, int] = (5, 20)
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "gate_set", frozenset(self.gate_set))
        object.__setattr__(self, "init_len_range", tuple(self.init_len_range))
        for name in ("num_particles", "num_iterations", "num_qubits", "max_body_len"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        for name in ("c1", "c2"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ConfigError(f"{name} must be a finite non-negative number, got {value}")
        sched = self.weight_schedule
        weights = (sched.w,) if isinstance(sched, Constant) else (sched.w1, sched.w2)
        if any(not (w >= 0 and math.isfinite(w)) for w in weights):
            raise ConfigError(f"inertia weights must be finite and non-negative, got {sched}")
        lo, hi = self.init_len_range
        if not 1 <= lo <= hi <= self.max_body_len:
            raise ConfigError(
                f"init_len_range {self.init_len_range} must lie within [1, max_body_len={self.max_body_len}]"
            )
        check_problem_gate_set(self.gate_set, self.num_qubits)

    @property
    def t_max(self) -> int:
        # iterations are numbered 0..num_iterations-1; a one-iteration run still needs t_max >= 1
        return max(self.num_iterations - 1, 1)

    def describe(self) -> dict[str, str]:
        """Flat key/value echo of every setting."""
        sched = self.weight_schedule
        out = {
            "algorithm": "pso",
            "num_particles": str(self.num_particles),
            "num_iterations": str(self.num_iterations),
            "num_qubits": str(self.num_qubits),
            "c1": repr(float(self.c1)),
            "c2": repr(float(self.c2)),
            "fitness": self.fitness_kind.value,
            "gate_set": ",".join(k.value for k in GateKind if k in self.gate_set),
            "max_body_len": str(self.max_body_len),
            "init_len_min": str(self.init_len_range[0]),
            "init_len_max": str(self.init_len_range[1]),
            "seed": str(self.seed),
        }
        if isinstance(sched, Constant):
            out.update(weight_schedule="constant", w=repr(float(sched.w)))
        else:
            out.update(weight_schedule="tviw", w1=repr(float(sched.w1)), w2=repr(float(sched.w2)))
        return out


@dataclass(frozen=True)
class Particle:
    position: Body
    velocity: Body
    pbest_position: Body
    pbest_fitness: float
    fitness: float


@dataclass(frozen=True)
class Swarm:
    particles: tuple[Particle, ...]
    gbest_position: Body
    gbest_fitness: float
    iteration: int = 0
    weight: float | None = None


def stable_sample(source: Sequence[Instruction], count: int, rng: np.random.Generator) -> Body:
    """Choose ``min(count, len(source))`` elements without replacement, kept in source order."""
    source = tuple(source)
    count = max(0, min(int(count), len(source)))
    if count == len(source):
        return source
    if count == 0:
        return ()
    picked = np.sort(rng.choice(len(source), size=count, replace=False))
    return tuple(source[i] for i in picked)


def update_particle(
    p: Particle, gbest: Sequence[Instruction], w_t: float, cfg: SwarmConfig, rng: np.random.Generator
) -> Particle:
    """Move one particle; pbest and fitness are left for the caller to refresh."""
    gbest = tuple(gbest)
    keep = round_count(w_t * len(p.velocity))
    k1 = min(round_count(cfg.c1), len(p.pbest_position))
    k2 = min(round_count(cfg.c2), len(gbest))
    velocity = (
        stable_sample(p.velocity, keep, rng)
        + stable_sample(p.pbest_position, k1, rng)
        + stable_sample(gbest, k2, rng)
    )
    position = window(p.position + velocity, cfg.max_body_len)
    return replace(p, position=position, velocity=velocity)


def _fitness(body: Body, cfg: SwarmConfig) -> float:
    return circuit_fitness(Circuit(cfg.num_qubits, body), cfg.fitness_kind)


def _best_index(values: Sequence[float]) -> int:
    return max(range(len(values)), key=values.__getitem__)


def init_swarm(cfg: SwarmConfig, rng: np.random.Generator | None = None) -> Swarm:
    """Random initial swarm.

    Each particle draws from its own substream of ``cfg.seed`` unless a single
    ``rng`` is supplied, in which case all particles share it.
    """
    lo, hi = cfg.init_len_range
    particles = []
    for i in range(cfg.num_particles):
        stream = rng if rng is not None else substream(cfg.seed, _INIT_STREAM, i)
        length = int(stream.integers(lo, hi + 1))
        body = random_body(length, cfg.num_qubits, cfg.gate_set, stream)
        fit = _fitness(body, cfg)
        particles.append(Particle(body, (), body, fit, fit))
    best = _best_index([p.pbest_fitness for p in particles])
    return Swarm(tuple(particles), particles[best].pbest_position, particles[best].pbest_fitness)


def _advance(task: tuple[Particle, Body, float, SwarmConfig, int, int]) -> Particle:
    p, gbest, w_t, cfg, iteration, index = task
    rng = substream(cfg.seed, _STEP_STREAM, iteration, index)
    moved = update_particle(p, gbest, w_t, cfg, rng)
    fit = _fitness(moved.position, cfg)
    if fit > moved.pbest_fitness:
        return replace(moved, fitness=fit, pbest_position=moved.position, pbest_fitness=fit)
    return replace(moved, fitness=fit)


MapFn = Callable[..., Iterable]


def step(swarm: Swarm, cfg: SwarmConfig, map_fn: MapFn = map) -> Swarm:
    """One synchronous iteration.

    Particles only read the gbest snapshot taken before the iteration, so
    ``map_fn`` may evaluate them in any order or in parallel (for instance
    ``executor.map``) without changing the result.
    """
    if swarm.iteration >= cfg.num_iterations:
        raise ValueError(f"swarm already ran {cfg.num_iterations} iterations")
    t = swarm.iteration
    w_t = schedule_weight(cfg.weight_schedule, t, cfg.t_max)
    tasks = [(p, swarm.gbest_position, w_t, cfg, t, i) for i, p in enumerate(swarm.particles)]
    particles = tuple(map_fn(_advance, tasks))
    best = _best_index([p.pbest_fitness for p in particles])
    gbest_position, gbest_fitness = swarm.gbest_position, swarm.gbest_fitness
    if particles[best].pbest_fitness > gbest_fitness:
        gbest_position, gbest_fitness = particles[best].pbest_position, particles[best].pbest_fitness
    return Swarm(particles, gbest_position, gbest_fitness, t + 1, w_t)


def iterate_pso(cfg: SwarmConfig, map_fn: MapFn = map) -> Iterator[Swarm]:
    """Yield the initial swarm followed by the swarm after each iteration."""
    swarm = init_swarm(cfg)
    yield swarm
    while swarm.iteration < cfg.num_iterations:
        swarm = step(swarm, cfg, map_fn)
        yield swarm


def record_from_history(history: Sequence[Swarm], cfg: SwarmConfig) -> RunRecord:
    initial, *steps = history
    rows = []
    per_particle = []
    for swarm in steps:
        fits = [p.fitness for p in swarm.particles]
        worst, avg, best = iteration_stats(fits)
        rows.append(IterationRow(swarm.iteration - 1, worst, avg, best, swarm.gbest_fitness, swarm.weight))
        per_particle.append(tuple(fits))
    final = history[-1]
    return RunRecord(
        algorithm="pso",
        config=cfg.describe(),
        rows=tuple(rows),
        particle_fitness=tuple(per_particle),
        best_circuit=Circuit(cfg.num_qubits, final.gbest_position),
        best_fitness=final.gbest_fitness,
        initial_best=initial.gbest_fitness,
    )


def run_pso(cfg: SwarmConfig, map_fn: MapFn = map) -> RunRecord:
    return record_from_history(list(iterate_pso(cfg, map_fn)), cfg)

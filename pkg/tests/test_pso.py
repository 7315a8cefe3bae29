from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instructions
from qcpso.circuit import ConfigError, GateKind, Instruction
from qcpso.fitness import FitnessKind
from qcpso.pso import (
    Constant,
    Particle,
    Swarm,
    SwarmConfig,
    TimeVarying,
    init_swarm,
    iterate_pso,
    round_count,
    run_pso,
    schedule_weight,
    stable_sample,
    step,
    update_particle,
)


def gates(n, offset=0.0):
    """Distinct, easily identified instructions."""
    return tuple(Instruction(GateKind.RZ, (0,), offset + i / 1000) for i in range(n))


OPTIMUM = tuple(Instruction(GateKind.H, (q,)) for q in range(5)) + tuple(Instruction(GateKind.X, (q,)) for q in range(5))
SMALL = SwarmConfig(num_particles=8, num_iterations=5, seed=3)


# stable_sample


def test_sample_zero_is_empty():
    assert stable_sample(gates(3), 0, np.random.default_rng(0)) == ()


def test_full_sample_keeps_order():
    assert stable_sample(gates(3), 3, np.random.default_rng(0)) == gates(3)
    assert stable_sample(gates(3), 10, np.random.default_rng(0)) == gates(3)
    assert stable_sample((), 4, np.random.default_rng(0)) == ()


def test_pair_subsequences_are_uniform():
    src = gates(4)
    rng = np.random.default_rng(12)
    counts = Counter(stable_sample(src, 2, rng) for _ in range(10_000))
    assert set(counts) == {tuple(c) for c in combinations(src, 2)}
    for c in counts.values():
        assert abs(c / 10_000 - 1 / 6) <= 0.02


@settings(max_examples=200)
@given(st.lists(instructions(3), max_size=20), st.integers(-3, 25), st.integers(0, 2**32))
def test_sample_is_ordered_subsequence(src, count, seed):
    out = stable_sample(src, count, np.random.default_rng(seed))
    assert len(out) == max(0, min(count, len(src)))
    it = iter(range(len(src)))
    # every element found in order without reuse
    for g in out:
        assert any(src[i] is g for i in it)


# schedule_weight


def test_constant_weight():
    for t in (0, 5, 29):
        assert schedule_weight(Constant(1), t, 29) == 1


def test_constant_weight_is_clamped():
    assert schedule_weight(Constant(1.7), 0, 10) == 1.0


def test_tviw_endpoints():
    assert schedule_weight(TimeVarying(1, 0.3), 29, 29) == pytest.approx(0.3, abs=1e-15)
    assert schedule_weight(TimeVarying(1, 0.3), 0, 29) == 1.0


def test_tviw_is_linear_and_decreasing():
    ws = [schedule_weight(TimeVarying(1, 0.3), t, 29) for t in range(30)]
    assert all(a >= b for a, b in zip(ws, ws[1:]))
    assert np.allclose(np.diff(ws), -0.7 / 29)


def test_schedule_rejects_bad_t():
    with pytest.raises(ValueError):
        schedule_weight(Constant(1), 5, 4)
    with pytest.raises(ValueError):
        schedule_weight(Constant(1), 0, 0)


# update_particle


def test_round_count_half_away_from_zero():
    assert [round_count(x) for x in (0, 0.49, 0.5, 1.5, 2.5, 4.0)] == [0, 0, 1, 2, 3, 4]


def test_all_sources_empty():
    p = Particle(gates(4), (), (), 0.0, 0.0)
    out = update_particle(p, (), 0.7, SwarmConfig(c1=3, c2=3), np.random.default_rng(0))
    assert out.position == p.position and out.velocity == ()


def test_full_inertia_keeps_velocity():
    v = gates(5, 1)
    p = Particle(gates(4), v, gates(6, 2), 0.0, 0.0)
    cfg = SwarmConfig(c1=0, c2=0)
    out = update_particle(p, gates(7, 3), 1.0, cfg, np.random.default_rng(0))
    assert out.velocity == v
    assert out.position == p.position + v


def test_position_window():
    p = Particle(gates(60), gates(10, 1), (), 0.0, 0.0)
    out = update_particle(p, (), 1.0, SwarmConfig(c1=0, c2=0, max_body_len=64), np.random.default_rng(0))
    assert out.position == (gates(60) + gates(10, 1))[6:]
    assert len(out.position) == 64


def test_sample_sizes():
    p = Particle(gates(3), gates(10, 1), gates(8, 2), 0.0, 0.0)
    out = update_particle(p, gates(1, 3), 0.35, SwarmConfig(c1=1.5, c2=4.0), np.random.default_rng(1))
    from_v = [g for g in out.velocity if g in gates(10, 1)]
    from_p = [g for g in out.velocity if g in gates(8, 2)]
    from_g = [g for g in out.velocity if g in gates(1, 3)]
    # round(0.35*10)=4, round(1.5)=2, min(round(4.0), 1)=1
    assert (len(from_v), len(from_p), len(from_g)) == (4, 2, 1)
    assert out.velocity == tuple(from_v + from_p + from_g)


def test_pbest_untouched_by_update():
    p = Particle(gates(3), gates(2, 1), gates(4, 2), 7.0, 5.0)
    out = update_particle(p, gates(5, 3), 0.5, SwarmConfig(), np.random.default_rng(2))
    assert (out.pbest_position, out.pbest_fitness, out.fitness) == (p.pbest_position, 7.0, 5.0)


@settings(max_examples=200)
@given(
    st.lists(instructions(3), max_size=30),
    st.lists(instructions(3), max_size=30),
    st.lists(instructions(3), max_size=30),
    st.lists(instructions(3), max_size=30),
    st.floats(0, 1),
    st.floats(0, 6),
    st.floats(0, 6),
    st.integers(1, 40),
    st.integers(0, 2**32),
)
def test_update_provenance_and_cap(pos, vel, pbest, gbest, w, c1, c2, cap, seed):
    cfg = SwarmConfig(num_qubits=3, c1=c1, c2=c2, max_body_len=cap, init_len_range=(1, 1))
    p = Particle(tuple(pos), tuple(vel), tuple(pbest), 0.0, 0.0)
    out = update_particle(p, gbest, w, cfg, np.random.default_rng(seed))
    donors = set(vel) | set(pbest) | set(gbest)
    assert all(g in donors for g in out.velocity)
    assert len(out.velocity) == round_count(w * len(vel)) + min(round_count(c1), len(pbest)) + min(
        round_count(c2), len(gbest)
    )
    assert len(out.position) <= cap
    assert out.position == (tuple(pos) + out.velocity)[-cap:]


# swarm


def test_init_swarm_population():
    swarm = init_swarm(SwarmConfig(num_particles=50))
    assert len(swarm.particles) == 50
    assert swarm.gbest_fitness == max(p.pbest_fitness for p in swarm.particles)
    assert swarm.iteration == 0
    for p in swarm.particles:
        assert p.velocity == () and p.pbest_position == p.position and p.fitness == p.pbest_fitness
        assert 5 <= len(p.position) <= 20


def test_init_degenerate_length_range():
    swarm = init_swarm(SwarmConfig(num_particles=10, init_len_range=(1, 1)))
    assert all(len(p.position) == 1 for p in swarm.particles)


def test_init_is_deterministic():
    assert init_swarm(SMALL) == init_swarm(SMALL)
    assert init_swarm(SMALL, np.random.default_rng(4)) == init_swarm(SMALL, np.random.default_rng(4))
    assert init_swarm(SMALL) != init_swarm(SwarmConfig(num_particles=8, num_iterations=5, seed=4))


def test_step_keeps_optimum():
    cfg = SwarmConfig(num_particles=4, num_iterations=3)
    swarm = init_swarm(cfg)
    best = Particle(OPTIMUM, (), OPTIMUM, 31.0, 31.0)
    swarm = Swarm((best,) + swarm.particles[1:], OPTIMUM, 31.0)
    after = step(swarm, cfg)
    assert after.gbest_fitness == 31.0
    assert after.gbest_position == OPTIMUM


def test_step_monotone_and_bounded():
    history = list(iterate_pso(SMALL))
    assert len(history) == SMALL.num_iterations + 1
    for before, after in zip(history, history[1:]):
        assert after.gbest_fitness >= before.gbest_fitness
        assert after.iteration == before.iteration + 1
        for p0, p1 in zip(before.particles, after.particles):
            assert p1.pbest_fitness >= p0.pbest_fitness
            assert len(p1.position) <= SMALL.max_body_len


def test_step_past_end_raises():
    cfg = SwarmConfig(num_particles=3, num_iterations=1)
    swarm = step(init_swarm(cfg), cfg)
    with pytest.raises(ValueError):
        step(swarm, cfg)


def test_step_order_independent_of_map():
    swarm = init_swarm(SMALL)

    def reversed_map(fn, items):
        items = list(items)
        out = [fn(x) for x in reversed(items)]
        return reversed(out)

    assert step(swarm, SMALL) == step(swarm, SMALL, reversed_map)


def test_run_single_iteration():
    record = run_pso(SwarmConfig(num_particles=5, num_iterations=1))
    assert len(record.rows) == 1 and len(record.particle_fitness[0]) == 5


def test_run_is_deterministic():
    assert run_pso(SMALL) == run_pso(SMALL)


def test_run_record_statistics():
    record = run_pso(SMALL)
    for row, fits in zip(record.rows, record.particle_fitness):
        assert row.worst == min(fits) and row.best == max(fits)
        assert row.worst <= row.avg <= row.best <= row.gbest
        assert row.weight == 1.0
    assert record.best_fitness == record.rows[-1].gbest
    assert record.best_fitness >= record.initial_best


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(num_particles=0),
        dict(num_iterations=0),
        dict(c1=-1),
        dict(c2=float("nan")),
        dict(weight_schedule=Constant(-0.5)),
        dict(weight_schedule=TimeVarying(1, -0.1)),
        dict(init_len_range=(0, 3)),
        dict(init_len_range=(5, 80)),
        dict(init_len_range=(6, 5)),
        dict(gate_set={GateKind.H, GateKind.Z}),
        dict(gate_set=set()),
        dict(num_qubits=1, gate_set={GateKind.CX}),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SwarmConfig(**kwargs)


def test_fe1_runs():
    record = run_pso(SwarmConfig(num_particles=6, num_iterations=3, fitness_kind=FitnessKind.FE1))
    assert 0 <= record.best_fitness <= 31

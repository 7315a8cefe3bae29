import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import fe1_loop, fe2_loop
from qcpso.circuit import Circuit, GateKind, Instruction
from qcpso.fitness import FitnessKind, best_weighted_state, circuit_fitness, evaluate, evaluate_fe1, evaluate_fe2


def point_mass(n, k):
    p = np.zeros(2**n)
    p[k] = 1.0
    return p


@st.composite
def distributions(draw, n=None):
    if n is None:
        n = draw(st.integers(1, 5))
    weights = draw(arrays(float, 2**n, elements=st.floats(0, 1)))
    if weights.sum() == 0:
        weights[draw(st.integers(0, 2**n - 1))] = 1.0
    return weights / weights.sum()


def test_uniform_five_qubits():
    p = np.full(32, 1 / 32)
    assert evaluate_fe1(p) == pytest.approx(0.96875, abs=1e-12)
    assert evaluate_fe2(p) == pytest.approx(15.5, abs=1e-12)


def test_all_ones_point_mass_scores_31():
    assert evaluate_fe1(point_mass(5, 31)) == 31
    assert evaluate_fe2(point_mass(5, 31)) == 31


def test_fe1_three_qubit_example():
    assert evaluate_fe1(np.array([0, 0, 0.5, 0, 0, 0, 0, 0.5])) == pytest.approx(3.5, abs=1e-12)


def test_fe2_two_qubit_example():
    assert evaluate_fe2(np.full(4, 0.25)) == pytest.approx(1.5, abs=1e-12)


def test_fe1_tie_goes_to_larger_state():
    # 0.5*2 == 0.25*4 == 1.0
    p = np.array([0.25, 0, 0.5, 0, 0.25, 0, 0, 0])
    assert best_weighted_state(p) == 4
    assert evaluate_fe1(p) == 1.0


def test_zero_state_scores_zero():
    assert evaluate_fe1(point_mass(3, 0)) == 0
    assert evaluate_fe2(point_mass(3, 0)) == 0


@pytest.mark.parametrize("n", [1, 3, 5])
def test_point_masses(n):
    for k in range(2**n):
        assert evaluate_fe1(point_mass(n, k)) == k
        assert evaluate_fe2(point_mass(n, k)) == k


@settings(max_examples=300)
@given(distributions())
def test_matches_loops_and_stays_in_range(p):
    top = len(p) - 1
    assert evaluate_fe1(p) == pytest.approx(fe1_loop(p), abs=1e-12)
    assert evaluate_fe2(p) == pytest.approx(fe2_loop(p), abs=1e-12)
    for kind in FitnessKind:
        assert 0 <= evaluate(kind, p) <= top


@settings(max_examples=200)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(distributions(n), distributions(n))), st.floats(0, 1))
def test_fe2_is_linear(pq, alpha):
    p, q = pq
    mixed = alpha * p + (1 - alpha) * q
    assert evaluate_fe2(mixed) == pytest.approx(alpha * evaluate_fe2(p) + (1 - alpha) * evaluate_fe2(q), abs=1e-12)


def test_circuit_fitness_uses_simulation():
    body = tuple(Instruction(GateKind.H, (q,)) for q in range(5)) + tuple(
        Instruction(GateKind.X, (q,)) for q in range(5)
    )
    for kind in FitnessKind:
        assert circuit_fitness(Circuit(5, body), kind) == pytest.approx(31, abs=1e-9)

import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from qcpso.circuit import TAU, Circuit, GateKind, Instruction  # noqa: E402

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome for the end-of-run report."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())


angles = st.floats(min_value=0.0, max_value=TAU, exclude_max=True, allow_nan=False)


@st.composite
def instructions(draw, num_qubits):
    kinds = [k for k in GateKind if k.arity <= num_qubits]
    kind = draw(st.sampled_from(kinds))
    if kind.arity == 2:
        control = draw(st.integers(0, num_qubits - 1))
        target = draw(st.integers(0, num_qubits - 1).filter(lambda t: t != control))
        targets = (control, target)
    else:
        targets = (draw(st.integers(0, num_qubits - 1)),)
    angle = draw(angles) if kind.parameterized else None
    return Instruction(kind, targets, angle)


@st.composite
def circuits(draw, max_qubits=5, max_len=12):
    n = draw(st.integers(1, max_qubits))
    body = draw(st.lists(instructions(n), max_size=max_len))
    return Circuit(n, tuple(body))

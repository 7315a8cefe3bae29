"""Command line interface.

Examples::

    qcpso run --algo pso --seed 7 --out results/run7
    qcpso experiment --preset all --fitness fe1 --seeds 20 --out results/fe1
    qcpso compare --seeds 20 --out results/compare
    qcpso simulate --in results/run7/best_circuit.qasm
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterator, Sequence

from .circuit import ConfigError, check_problem_gate_set, parse_gate_set
from .fitness import FitnessKind, evaluate_fe1, evaluate_fe2
from .ga import GaConfig
from .harness import (
    PRESETS,
    compare,
    compare_summary,
    median_final,
    preset,
    run_config,
    run_experiment,
    write_compare,
    write_csv,
    write_run,
)
from .pso import Constant, SwarmConfig, TimeVarying, run_pso
from .qasm import QasmError, format_float, parse_qasm
from .simulator import probabilities

PROG = "qcpso"


class UsageError(Exception):
    """Invalid flag value; exits with status 2."""


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (value >= 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a finite non-negative number, got {text}")
    return value


def _rate(text: str) -> float:
    value = _nonneg_float(text)
    if value > 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not -(1 << 63) <= value < (1 << 64):
        raise argparse.ArgumentTypeError("must fit in 64 bits")
    return value


def _gates(text: str):
    try:
        return parse_gate_set(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--qubits", type=_positive_int, default=5)
    p.add_argument("--particles", type=_positive_int, default=50, help="swarm or population size")
    p.add_argument("--iterations", type=_positive_int, default=30, help="iterations or generations")
    p.add_argument("--fitness", choices=["fe1", "fe2"], default="fe2")
    p.add_argument("--gates", type=_gates, default=None, help="comma separated, e.g. h,x,y,z,cx,rx,ry,rz")
    p.add_argument("--max-len", type=_positive_int, default=64, help="maximum circuit body length")
    p.add_argument("--workers", type=_positive_int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Particle swarm synthesis of MaxOne quantum circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="one optimisation run")
    run.add_argument("--algo", choices=["pso", "ga"], default="pso")
    _add_problem_flags(run)
    run.add_argument("--c1", type=_nonneg_float, default=1.5)
    run.add_argument("--c2", type=_nonneg_float, default=4.0)
    run.add_argument("--w-schedule", choices=["constant", "tviw"], default="constant")
    run.add_argument("--w1", type=_nonneg_float, default=1.0, help="initial (or constant) inertia weight")
    run.add_argument("--w2", type=_nonneg_float, default=0.3, help="final inertia weight for tviw")
    run.add_argument("--tournament", type=_positive_int, default=3)
    run.add_argument("--crossover-rate", type=_rate, default=0.8)
    run.add_argument("--mutation-rate", type=_rate, default=0.1)
    run.add_argument("--elitism", type=_nonneg_int, default=1)
    run.add_argument("--seed", type=_seed, default=0)
    run.add_argument("--out", type=Path, default=Path("results/run"))

    exp = sub.add_parser("experiment", help="batch of preset runs")
    exp.add_argument("--preset", choices=[*PRESETS, "all"], default="all")
    _add_problem_flags(exp)
    exp.add_argument("--seeds", type=_positive_int, default=20, help="run seeds 0..N-1")
    exp.add_argument("--out", type=Path, default=Path("results"))

    cmp_ = sub.add_parser("compare", help="PSO against GA with matched budgets")
    cmp_.add_argument("--preset", choices=list(PRESETS), default="social", help="PSO parameters")
    _add_problem_flags(cmp_)
    cmp_.add_argument("--seeds", type=_positive_int, default=20, help="run seeds 0..N-1")
    cmp_.add_argument("--out", type=Path, default=Path("results/compare"))

    sim = sub.add_parser("simulate", help="probabilities and fitness of a QASM circuit")
    sim.add_argument("--in", dest="input", type=Path, required=True)
    return parser


def _problem(args: argparse.Namespace) -> dict:
    gates = args.gates if args.gates is not None else SwarmConfig.gate_set
    try:
        check_problem_gate_set(gates, args.qubits)
    except ConfigError as exc:
        raise UsageError(f"--gates: {exc}") from None
    lo, hi = SwarmConfig.init_len_range
    return dict(
        num_qubits=args.qubits,
        fitness_kind=FitnessKind(args.fitness),
        gate_set=gates,
        max_body_len=args.max_len,
        init_len_range=(min(lo, args.max_len), min(hi, args.max_len)),
    )


def _ga_config(args: argparse.Namespace, base: dict, seed: int = 0, **ops) -> GaConfig:
    if ops.get("elitism", 1) >= args.particles:
        raise UsageError("--elitism: must be smaller than --particles")
    return GaConfig(population=args.particles, generations=args.iterations, seed=seed, **ops, **base)


@contextlib.contextmanager
def _executor(workers: int) -> Iterator[ProcessPoolExecutor | None]:
    if workers <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield pool


def _cmd_run(args: argparse.Namespace) -> int:
    base = _problem(args)
    if args.algo == "pso":
        schedule = Constant(args.w1) if args.w_schedule == "constant" else TimeVarying(args.w1, args.w2)
        cfg = SwarmConfig(
            num_particles=args.particles,
            num_iterations=args.iterations,
            c1=args.c1,
            c2=args.c2,
            weight_schedule=schedule,
            seed=args.seed,
            **base,
        )
        with _executor(args.workers) as pool:
            record = run_pso(cfg, pool.map if pool is not None else map)
    else:
        cfg = _ga_config(
            args,
            base,
            seed=args.seed,
            tournament_size=args.tournament,
            crossover_rate=args.crossover_rate,
            mutation_rate=args.mutation_rate,
            elitism=args.elitism,
        )
        record = run_config(cfg)
    write_run(record, args.out)
    print(f"best_fitness={format_float(record.best_fitness)}")
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    base = _problem(args)
    names = list(PRESETS) if args.preset == "all" else [args.preset]
    with _executor(args.workers) as pool:
        for name in names:
            p = preset(
                name,
                FitnessKind(args.fitness),
                range(args.seeds),
                num_particles=args.particles,
                num_iterations=args.iterations,
                **{k: v for k, v in base.items() if k != "fitness_kind"},
            )
            records = run_experiment(p, pool)
            write_csv(records, args.out)
            print(f"{name}: median_final={format_float(median_final(records))}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    base = _problem(args)
    pso_cfg = SwarmConfig(num_particles=args.particles, num_iterations=args.iterations, **PRESETS[args.preset], **base)
    ga_cfg = _ga_config(args, base)
    with _executor(args.workers) as pool:
        results = compare(pso_cfg, ga_cfg, range(args.seeds), pool)
    path = write_compare(results, args.out)
    for key, value in compare_summary(results).items():
        print(f"{key}={format_float(float(value))}")
    print(f"wrote {path}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        text = args.input.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"--in: cannot read {args.input}: {exc.strerror or exc}") from None
    try:
        circuit = parse_qasm(text)
    except QasmError as exc:
        raise UsageError(f"--in: {args.input}: {exc}") from None
    probs = probabilities(circuit)
    n = circuit.num_qubits
    for k, p in enumerate(probs):
        print(f"{k:0{n}b} {p:.12g}")
    print(f"fe1={evaluate_fe1(probs):.12g}")
    print(f"fe2={evaluate_fe2(probs):.12g}")
    return 0


_COMMANDS = {"run": _cmd_run, "experiment": _cmd_experiment, "compare": _cmd_compare, "simulate": _cmd_simulate}


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

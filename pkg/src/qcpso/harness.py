"""Named experiment presets, seed batches, and result files.

Output layout for one run::

    <out>/<preset>/<seed>/summary.csv
                          particles.csv
                          best_circuit.qasm
                          config.txt
                          chart.svg
"""

from __future__ import annotations

import statistics
from concurrent.futures import Executor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Sequence

from .fitness import FitnessKind
from .ga import GaConfig, run_ga
from .pso import Constant, SwarmConfig, TimeVarying, run_pso
from .qasm import emit_qasm, format_float
from .record import RunRecord, iteration_stats

__all__ = [
    "DEFAULT_SEEDS",
    "PRESETS",
    "Comparison",
    "ExperimentPreset",
    "compare",
    "compare_csv",
    "iteration_stats",
    "preset",
    "run_config",
    "run_experiment",
    "write_csv",
    "write_run",
]

DEFAULT_SEEDS = tuple(range(20))


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    algorithm: str = "pso"
    overrides: dict[str, Any] = field(default_factory=dict)
    fitness_kind: FitnessKind = FitnessKind.FE2
    seeds: tuple[int, ...] = DEFAULT_SEEDS

    def __post_init__(self) -> None:
        if self.algorithm not in ("pso", "ga"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        object.__setattr__(self, "seeds", tuple(self.seeds))
        if not self.seeds:
            raise ValueError("a preset needs at least one seed")

    def config(self, seed: int) -> SwarmConfig | GaConfig:
        cls = SwarmConfig if self.algorithm == "pso" else GaConfig
        return cls(**{**self.overrides, "fitness_kind": self.fitness_kind, "seed": seed})


# learning-bias and inertia-weight settings; the inertia runs use the social bias
PRESETS: dict[str, dict[str, Any]] = {
    "balanced": dict(c1=1.5, c2=1.5, weight_schedule=Constant(1.0)),
    "cognitive": dict(c1=4.0, c2=1.5, weight_schedule=Constant(1.0)),
    "social": dict(c1=1.5, c2=4.0, weight_schedule=Constant(1.0)),
    "ciw": dict(c1=1.5, c2=4.0, weight_schedule=TimeVarying(1.0, 1.0)),
    "tviw": dict(c1=1.5, c2=4.0, weight_schedule=TimeVarying(1.0, 0.3)),
}

_ALIASES = {
    "balanced learning": "balanced",
    "cognitive learning": "cognitive",
    "social learning": "social",
    "predefined-constant iw": "ciw",
    "time-varying iw": "tviw",
}


def preset(
    name: str,
    fitness_kind: FitnessKind = FitnessKind.FE2,
    seeds: Iterable[int] = DEFAULT_SEEDS,
    **overrides: Any,
) -> ExperimentPreset:
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return ExperimentPreset(key, "pso", {**PRESETS[key], **overrides}, fitness_kind, tuple(seeds))


def run_config(cfg: SwarmConfig | GaConfig) -> RunRecord:
    return run_pso(cfg) if isinstance(cfg, SwarmConfig) else run_ga(cfg)


def run_experiment(p: ExperimentPreset, executor: Executor | None = None) -> list[RunRecord]:
    """One record per seed, in seed order. ``executor`` spreads seeds over workers."""
    configs = [p.config(seed) for seed in p.seeds]
    mapper = executor.map if executor is not None else map
    return [replace(r, meta={**r.meta, "preset": p.name}) for r in mapper(run_config, configs)]


def _fmt(value: float | None) -> str:
    return "" if value is None else format_float(value)


def _write(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def summary_csv(record: RunRecord) -> str:
    lines = ["iteration,worst,avg,best,gbest,weight"]
    for r in record.rows:
        lines.append(
            ",".join([str(r.iteration), _fmt(r.worst), _fmt(r.avg), _fmt(r.best), _fmt(r.gbest), _fmt(r.weight)])
        )
    return "\n".join(lines) + "\n"


def particles_csv(record: RunRecord) -> str:
    lines = ["iteration,particle,fitness"]
    for row, fits in zip(record.rows, record.particle_fitness):
        lines.extend(f"{row.iteration},{i},{_fmt(f)}" for i, f in enumerate(fits))
    return "\n".join(lines) + "\n"


def config_txt(record: RunRecord) -> str:
    items = {**record.config, **record.meta, "best_fitness": _fmt(record.best_fitness)}
    return "".join(f"{k} = {items[k]}\n" for k in sorted(items))


def chart_svg(record: RunRecord, width: int = 640, height: int = 360) -> str:
    """Line chart of worst, average, best and global best fitness per iteration."""
    pad = 40
    rows = record.rows
    top = max([r.gbest for r in rows] + [1e-12])
    span_x = max(len(rows) - 1, 1)

    def point(i: int, v: float) -> str:
        x = pad + (width - 2 * pad) * i / span_x
        y = height - pad - (height - 2 * pad) * v / top
        return f"{x:.2f},{y:.2f}"

    series = [("worst", "#d62728"), ("avg", "#1f77b4"), ("best", "#2ca02c"), ("gbest", "#000000")]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{pad - 10}" font-size="12">max {top:.6g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="12" text-anchor="end">'
        f"iteration {len(rows) - 1}</text>",
    ]
    for k, (name, colour) in enumerate(series):
        pts = " ".join(point(i, getattr(r, name)) for i, r in enumerate(rows))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{width - pad + 4}" y="{pad + 14 * k}" font-size="11" fill="{colour}">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_run(record: RunRecord, run_dir: Path | str, chart: bool = True) -> Path:
    run_dir = Path(run_dir)
    try:
        run_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {run_dir}: {exc.strerror or exc}") from exc
    _write(run_dir / "summary.csv", summary_csv(record))
    _write(run_dir / "particles.csv", particles_csv(record))
    _write(run_dir / "best_circuit.qasm", emit_qasm(record.best_circuit))
    _write(run_dir / "config.txt", config_txt(record))
    if chart:
        _write(run_dir / "chart.svg", chart_svg(record))
    return run_dir


def write_csv(records: Sequence[RunRecord], out_dir: Path | str, chart: bool = True) -> list[Path]:
    """Write each record under ``<out_dir>/<preset>/<seed>/``."""
    out_dir = Path(out_dir)
    return [
        write_run(r, out_dir / r.meta.get("preset", r.algorithm) / str(r.seed), chart) for r in records
    ]


def median_final(records: Sequence[RunRecord]) -> float:
    return statistics.median(r.best_fitness for r in records)


@dataclass(frozen=True)
class Comparison:
    seed: int
    pso: RunRecord
    ga: RunRecord


def compare(
    pso_base: SwarmConfig, ga_base: GaConfig, seeds: Iterable[int], executor: Executor | None = None
) -> list[Comparison]:
    """Run both algorithms on each seed; the caller keeps population, iteration and fitness budgets matched."""
    seeds = tuple(seeds)
    configs = [replace(pso_base, seed=s) for s in seeds] + [replace(ga_base, seed=s) for s in seeds]
    mapper = executor.map if executor is not None else map
    records = list(mapper(run_config, configs))
    return [Comparison(s, p, g) for s, p, g in zip(seeds, records[: len(seeds)], records[len(seeds) :])]


def compare_csv(results: Sequence[Comparison]) -> str:
    lines = ["seed,pso_final,ga_final,pso_iters_to_best,ga_iters_to_best"]
    for c in results:
        lines.append(
            f"{c.seed},{_fmt(c.pso.best_fitness)},{_fmt(c.ga.best_fitness)},"
            f"{c.pso.iterations_to_best},{c.ga.iterations_to_best}"
        )
    return "\n".join(lines) + "\n"


def compare_summary(results: Sequence[Comparison]) -> dict[str, float]:
    return {
        "pso_median_final": statistics.median(c.pso.best_fitness for c in results),
        "ga_median_final": statistics.median(c.ga.best_fitness for c in results),
        "pso_median_iters_to_best": statistics.median(c.pso.iterations_to_best for c in results),
        "ga_median_iters_to_best": statistics.median(c.ga.iterations_to_best for c in results),
    }


def write_compare(results: Sequence[Comparison], out_dir: Path | str) -> Path:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc
    _write(out_dir / "compare.csv", compare_csv(results))
    if results:
        meta = {f"pso.{k}": v for k, v in results[0].pso.config.items() if k != "seed"}
        meta.update({f"ga.{k}": v for k, v in results[0].ga.config.items() if k != "seed"})
        meta.update({k: _fmt(float(v)) for k, v in compare_summary(results).items()})
        meta["seeds"] = ",".join(str(c.seed) for c in results)
        _write(out_dir / "compare_config.txt", "".join(f"{k} = {meta[k]}\n" for k in sorted(meta)))
    return out_dir / "compare.csv"

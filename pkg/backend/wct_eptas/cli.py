#!/usr/bin/env python3
"""
WCT EPTAS CLI - Command-Line Driver

Ponto de entrada de linha de comando:

- solve: roda o EPTAS adequado (com ou sem datas de liberação)
- oracle: roda o solver exato
- verify: valida um arquivo de schedule contra uma instância
- bench: suíte semeada com tabela de razões em CSV
- ledger: auditoria por estágio em CSV
- generate: instâncias semeadas por formato

Códigos de saída: 0 sucesso, 1 auditoria falhou, 2 SchedulingError.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .bands_eptas import eptas_no_release
from .core import (
    Instance,
    Job,
    Machine,
    SchedulingError,
    StageLedger,
    TimedSchedule,
    cost,
    format_instance,
    format_schedule,
    parse_instance,
    parse_schedule,
    to_timed,
    validate,
)
from .oracle import ObjectiveKind, OracleLimits, opt_no_release, opt_release
from .release_eptas import eptas_release
from .rounding import ParamPack, Profile

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_AUDIT = 1
EXIT_ERROR = 2


class Command(str, Enum):
    SOLVE = "solve"
    ORACLE = "oracle"
    VERIFY = "verify"
    BENCH = "bench"
    LEDGER = "ledger"
    GENERATE = "generate"


class Shape(str, Enum):
    UNIFORM = "uniform"
    BIMODAL_DENSITY = "bimodal-density"
    RELEASE_BURSTS = "release-bursts"
    POWER_SPEEDS = "power-speeds"


class RunSpec(BaseModel):
    """Uma execução da CLI, validada antes de qualquer trabalho"""
    model_config = ConfigDict(frozen=True)

    command: Command
    instance: Optional[Path] = None
    schedule: Optional[Path] = None
    eps: float = 0.5
    profile: Profile = Profile.PRACTICAL
    seed: int = 0
    suite: str = "small"
    shape: Shape = Shape.UNIFORM
    jobs: int = Field(default=5, ge=0)
    machines: int = Field(default=2, ge=1)
    release: bool = False
    snap: bool = False
    fallback: bool = True
    oracle_max_jobs: int = Field(default=7, ge=1)
    oracle_max_machines: int = Field(default=3, ge=1)
    out: Optional[Path] = None

    @field_validator("eps")
    @classmethod
    def _check_eps(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError(f"eps must lie in (0, 1], got {value}")
        return value

    @property
    def oracle_limits(self) -> OracleLimits:
        return OracleLimits(max_jobs=self.oracle_max_jobs, max_machines=self.oracle_max_machines)


# === GERADORES ===

def _snap(values: np.ndarray, delta: float) -> np.ndarray:
    """Arredonda cada valor para a potência de 1+δ mais próxima"""
    exponents = np.rint(np.log(values) / np.log1p(delta))
    return np.power(1 + delta, exponents)


def generate(seed: int, shape: Shape | str, n: int = 5, m: int = 2, release: bool = False,
             snap: bool = False, delta: float = 1 / 8) -> Instance:
    """
    Instância determinística a partir de uma semente

    release-bursts sempre tem datas de liberação, agrupadas em rajadas com
    centros geométricos; power-speeds usa velocidades que são potências
    exatas de 1+δ.
    """
    shape = Shape(shape)
    rng = np.random.default_rng(seed)
    sizes = rng.uniform(1.0, 10.0, n)
    weights = rng.uniform(1.0, 10.0, n)
    speeds = rng.uniform(1.0, 4.0, m)
    releases = rng.uniform(0.0, 10.0, n) if release else np.zeros(n)

    if shape is Shape.BIMODAL_DENSITY:
        heavy = rng.random(n) < 0.5
        weights = np.where(heavy, weights * 20.0, weights / 4.0)
    elif shape is Shape.RELEASE_BURSTS:
        release = True
        centers = np.power(4.0, rng.integers(0, 3, n))
        releases = centers * rng.uniform(1.0, 1.0 + delta, n)
    elif shape is Shape.POWER_SPEEDS:
        speeds = np.power(1 + delta, rng.integers(0, 9, m).astype(float))

    if snap:
        sizes, weights = _snap(sizes, delta), _snap(weights, delta)
        if shape is not Shape.POWER_SPEEDS:
            speeds = _snap(speeds, delta)
    if shape is not Shape.POWER_SPEEDS:
        speeds = np.round(speeds, 3)
    sizes, weights, releases = np.round(sizes, 3), np.round(weights, 3), np.round(releases, 3)

    machines = tuple(Machine(idx + 1, float(speeds[idx])) for idx in range(m))
    jobs = tuple(
        Job(idx + 1, float(sizes[idx]), float(weights[idx]), float(releases[idx])) for idx in range(n)
    )
    logger.debug(f"generate: seed={seed}, shape={shape.value}, n={n}, m={m}, release={release}")
    return Instance(jobs, machines, release)


SUITES: Dict[str, List[Tuple[int, Shape, int, int, bool]]] = {
    "small": [
        (0, Shape.UNIFORM, 4, 1, False),
        (1, Shape.UNIFORM, 5, 2, False),
        (2, Shape.BIMODAL_DENSITY, 6, 2, False),
        (3, Shape.POWER_SPEEDS, 5, 2, False),
        (4, Shape.UNIFORM, 4, 2, True),
        (5, Shape.RELEASE_BURSTS, 5, 2, True),
    ],
    "release": [
        (10 + seed, shape, 5, 2, True)
        for seed, shape in enumerate([Shape.UNIFORM, Shape.RELEASE_BURSTS, Shape.BIMODAL_DENSITY, Shape.POWER_SPEEDS])
    ],
}


# === EXECUÇÃO ===

def solve_instance(instance: Instance, spec: RunSpec) -> Tuple[TimedSchedule, float, Optional[float], StageLedger]:
    """Roda o EPTAS adequado; devolve schedule, valor, oracle e ledger"""
    limits = spec.oracle_limits
    if instance.has_release_dates:
        params = ParamPack.build(spec.eps, spec.profile, release=True)
        schedule, report = eptas_release(
            instance, spec.eps, params, fallback=spec.fallback,
            oracle_limits=OracleLimits.for_release(max_jobs=limits.max_jobs, max_machines=limits.max_machines),
        )
        return schedule, report.cost, report.oracle, report.ledger
    params = ParamPack.build(spec.eps, spec.profile, release=False)
    ordered, report = eptas_no_release(instance, spec.eps, params, oracle_limits=limits)
    return to_timed(instance, ordered), report.cost, report.oracle, report.ledger


def _read_instance(path: Optional[Path]) -> Instance:
    if path is None:
        raise SchedulingError("an instance path is required")
    try:
        return parse_instance(path.read_text())
    except OSError as exc:
        raise SchedulingError(f"cannot read instance {path}: {exc.strerror}") from None


def _emit(text: str, out: Optional[Path], stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
    else:
        out.write_text(text)


def _run_solve(spec: RunSpec, stdout: TextIO) -> int:
    instance = _read_instance(spec.instance)
    schedule, value, oracle, ledger = solve_instance(instance, spec)
    _emit(format_schedule(schedule), spec.out, stdout)
    kind = "pseudo_cost" if instance.has_release_dates else "cost"
    ratio = f" ratio={value / oracle:.6f}" if oracle else ""
    stdout.write(f"# {kind}={value:.9g}{ratio}\n")
    return EXIT_OK if ledger.all_passed else EXIT_AUDIT


def _run_oracle(spec: RunSpec, stdout: TextIO) -> int:
    instance = _read_instance(spec.instance)
    if instance.has_release_dates:
        delta = float(ParamPack.build(spec.eps, spec.profile, release=True).delta)
        limits = OracleLimits.for_release(
            max_jobs=spec.oracle_max_jobs, max_machines=spec.oracle_max_machines,
            objective=ObjectiveKind.PSEUDO_COST, timely_only=True, delta=delta,
        )
        schedule, value = opt_release(instance, limits)
    else:
        ordered, value = opt_no_release(instance, spec.oracle_limits)
        schedule = to_timed(instance, ordered)
    _emit(format_schedule(schedule), spec.out, stdout)
    stdout.write(f"# optimum={float(value):.9g}\n")
    return EXIT_OK


def _run_verify(spec: RunSpec, stdout: TextIO) -> int:
    instance = _read_instance(spec.instance)
    if spec.schedule is None:
        raise SchedulingError("verify needs --schedule")
    try:
        schedule = parse_schedule(spec.schedule.read_text())
    except OSError as exc:
        raise SchedulingError(f"cannot read schedule {spec.schedule}: {exc.strerror}") from None
    validate(instance, schedule)
    stdout.write(f"ok cost={float(cost(instance, schedule).total):.9g}\n")
    return EXIT_OK


def _run_bench(spec: RunSpec, stdout: TextIO) -> int:
    if spec.suite not in SUITES:
        raise SchedulingError(f"unknown suite {spec.suite!r}; choose from {sorted(SUITES)}")
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["seed", "shape", "n", "m", "release", "cost", "oracle", "ratio", "bound", "within"])
    all_within = True
    for seed, shape, n, m, release in SUITES[spec.suite]:
        instance = generate(spec.seed + seed, shape, n, m, release)
        _, value, oracle, _ = solve_instance(instance, spec)
        ratio = value / oracle if oracle else None
        within = ratio is None or ratio <= 1 + spec.eps + 1e-9
        all_within = all_within and within
        writer.writerow([
            spec.seed + seed, shape.value, n, m, int(instance.has_release_dates), f"{value:.9g}",
            "" if oracle is None else f"{oracle:.9g}", "" if ratio is None else f"{ratio:.6f}",
            f"{1 + spec.eps:.6f}", int(within),
        ])
        logger.info(f"bench: seed={spec.seed + seed} {shape.value} razão={ratio}")
    _emit(buffer.getvalue(), spec.out, stdout)
    return EXIT_OK if all_within else EXIT_AUDIT


def _run_ledger(spec: RunSpec, stdout: TextIO) -> int:
    instance = _read_instance(spec.instance)
    _, _, _, ledger = solve_instance(instance, spec)
    buffer = io.StringIO()
    ledger.write_csv(buffer)
    _emit(buffer.getvalue(), spec.out, stdout)
    for row in ledger.failures():
        logger.warning(f"auditoria falhou: {row.stage}: {row.check}")
    return EXIT_OK if ledger.all_passed else EXIT_AUDIT


def _run_generate(spec: RunSpec, stdout: TextIO) -> int:
    instance = generate(spec.seed, spec.shape, spec.jobs, spec.machines, spec.release, snap=spec.snap)
    _emit(format_instance(instance), spec.out, stdout)
    return EXIT_OK


HANDLERS = {
    Command.SOLVE: _run_solve,
    Command.ORACLE: _run_oracle,
    Command.VERIFY: _run_verify,
    Command.BENCH: _run_bench,
    Command.LEDGER: _run_ledger,
    Command.GENERATE: _run_generate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wct_eptas", description="EPTAS for weighted completion time on related machines")
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("instance", nargs="?", type=Path)
    parser.add_argument("--schedule", type=Path)
    parser.add_argument("--eps", type=float, default=0.5)
    parser.add_argument("--profile", choices=[p.value for p in Profile], default=Profile.PRACTICAL.value)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--suite", default="small")
    parser.add_argument("--shape", choices=[s.value for s in Shape], default=Shape.UNIFORM.value)
    parser.add_argument("--jobs", type=int, default=5)
    parser.add_argument("--machines", type=int, default=2)
    parser.add_argument("--release", action="store_true")
    parser.add_argument("--snap", action="store_true", help="round generated values to powers of 1+delta")
    parser.add_argument("--no-fallback", dest="fallback", action="store_false")
    parser.add_argument("--oracle-max-jobs", type=int, default=7)
    parser.add_argument("--oracle-max-machines", type=int, default=3)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--log-level", default="WARNING")
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """Executa um comando e devolve o código de saída"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format=LOG_FORMAT)
    try:
        spec = RunSpec(
            command=args.command, instance=args.instance, schedule=args.schedule, eps=args.eps,
            profile=args.profile, seed=args.seed, suite=args.suite, shape=args.shape, jobs=args.jobs,
            machines=args.machines, release=args.release, snap=args.snap, fallback=args.fallback, oracle_max_jobs=args.oracle_max_jobs,
            oracle_max_machines=args.oracle_max_machines, out=args.out,
        )
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    try:
        return HANDLERS[spec.command](spec, stdout)
    except SchedulingError as exc:
        logger.debug(f"{spec.command.value} falhou: {exc!r}")
        stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Oracle - Exact Reference Solvers

Solvers exatos usados como verdade para toda medição de razão:
- regra de Smith em uma máquina
- busca exaustiva sem datas de liberação (poda por limite Γ)
- busca exaustiva com datas de liberação, custo ou pseudo-custo

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import itertools
import logging
import time
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from .core import (
    Instance,
    Job,
    Machine,
    Number,
    OrderedSchedule,
    SchedulingError,
    Slot,
    TimedSchedule,
    UnsupportedInstanceError,
    gamma_lower_bound,
    geo_floor,
    geo_value,
    natural_order,
    tolerance,
)

logger = logging.getLogger(__name__)


class ObjectiveKind(str, Enum):
    COST = "cost"
    PSEUDO_COST = "pseudo_cost"


class OracleLimitError(SchedulingError):
    """Entrada acima dos limites do oracle"""

    def __init__(self, what: str, size: float, limit: float):
        super().__init__(f"oracle refuses: {what} {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class OracleLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_jobs: int = 8
    max_machines: int = 3
    time_budget: float = 120.0          # segundos
    objective: ObjectiveKind = ObjectiveKind.COST
    timely_only: bool = False
    prune: bool = True
    delta: Optional[float] = None

    @field_validator("max_jobs", "max_machines")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("limits must be positive")
        return value

    @classmethod
    def for_release(cls, **overrides) -> "OracleLimits":
        return cls(**{"max_jobs": 7, **overrides})

    def admits(self, instance: Instance) -> bool:
        return instance.n <= self.max_jobs and instance.m <= self.max_machines


def _check_limits(instance: Instance, limits: OracleLimits) -> None:
    if instance.n > limits.max_jobs:
        raise OracleLimitError("job count", instance.n, limits.max_jobs)
    if instance.m > limits.max_machines:
        raise OracleLimitError("machine count", instance.m, limits.max_machines)


class _Clock:
    def __init__(self, budget: float):
        self.budget = budget
        self.started = time.perf_counter()
        self.ticks = 0

    def tick(self) -> None:
        self.ticks += 1
        if self.ticks % 4096 == 0 and time.perf_counter() - self.started > self.budget:
            raise OracleLimitError("seconds", round(time.perf_counter() - self.started, 1), self.budget)


def smith_single_machine(jobs: Sequence[Job], speed: Number, machine_id: int = 1) -> Tuple[OrderedSchedule, Number]:
    """Ordem natural (razão de Smith) em uma única máquina"""
    if any(job.release > 0 for job in jobs):
        raise UnsupportedInstanceError("Smith's rule does not handle release dates")
    ordered = natural_order(jobs)
    load: Number = 0
    total: Number = 0
    for job in ordered:
        load = load + job.size
        total = total + job.weight * load / speed
    return OrderedSchedule({machine_id: tuple(j.id for j in ordered)}), total


def opt_no_release(instance: Instance, limits: OracleLimits = OracleLimits()) -> Tuple[OrderedSchedule, Number]:
    """
    Ótimo exato sem datas de liberação

    Os jobs são atribuídos na ordem natural global, então cada máquina recebe
    seus jobs já em ordem natural e o custo é incremental. Poda admissível:
    limite Γ do restante na velocidade agregada mais Σ w p/(2 s_1).
    """
    _check_limits(instance, limits)
    if any(job.release > 0 for job in instance.jobs):
        raise UnsupportedInstanceError("opt_no_release called on an instance with release dates")

    jobs = natural_order(instance.jobs)
    machines = list(instance.machines)
    if not jobs:
        return OrderedSchedule({mc.id: () for mc in machines}), 0

    total_speed = sum(mc.speed for mc in machines)
    aggregate = Machine(0, total_speed)
    fastest = machines[0].speed
    tail_bound = []
    for k in range(len(jobs) + 1):
        rest = jobs[k:]
        tail_bound.append(
            gamma_lower_bound(rest, aggregate) + sum((j.weight * j.size / (2 * fastest) for j in rest), 0)
        )

    loads: List[Number] = [0] * len(machines)
    assignment: List[int] = [0] * len(jobs)
    best: Dict[str, object] = {"value": None, "assignment": None}
    clock = _Clock(limits.time_budget)

    def search(k: int, partial: Number) -> None:
        clock.tick()
        incumbent = best["value"]
        if k == len(jobs):
            if incumbent is None or partial < incumbent - tolerance(incumbent):
                best["value"], best["assignment"] = partial, list(assignment)
            return
        if limits.prune and incumbent is not None and partial + tail_bound[k] >= incumbent - tolerance(incumbent):
            return
        job = jobs[k]
        for pos, machine in enumerate(machines):
            loads[pos] = loads[pos] + job.size
            assignment[k] = pos
            search(k + 1, partial + job.weight * loads[pos] / machine.speed)
            loads[pos] = loads[pos] - job.size

    search(0, 0)
    sequences = {mc.id: [] for mc in machines}
    for k, pos in enumerate(best["assignment"]):
        sequences[machines[pos].id].append(jobs[k].id)
    logger.debug(f"opt_no_release: n={instance.n}, m={instance.m}, valor={float(best['value']):.6g}")
    return OrderedSchedule(sequences), best["value"]


def _machine_value(
    jobs: Sequence[Job],
    speed: Number,
    objective: ObjectiveKind,
    timely: bool,
    delta: Optional[Number],
) -> Tuple[Number, Tuple[int, ...], Tuple[Number, ...]]:
    """Melhor permutação de uma máquina com início mais cedo possível"""
    best_value, best_order, best_completions = None, (), ()
    for order in itertools.permutations(sorted(jobs, key=lambda j: j.id)):
        cursor: Number = 0
        value: Number = 0
        completions = []
        for job in order:
            duration = job.size / speed
            start = max(cursor, job.release)
            if timely:
                start = max(start, delta * duration)
            cursor = start + duration
            completions.append(cursor)
            if objective is ObjectiveKind.PSEUDO_COST:
                value = value + job.weight * geo_value(geo_floor(cursor, delta) + 1, delta)
            else:
                value = value + job.weight * cursor
        if best_value is None or value < best_value - tolerance(best_value):
            best_value = value
            best_order = tuple(j.id for j in order)
            best_completions = tuple(completions)
    return (best_value if best_value is not None else 0), best_order, best_completions


def opt_release(
    instance: Instance,
    limits: Optional[OracleLimits] = None,
    objective: Optional[ObjectiveKind] = None,
) -> Tuple[TimedSchedule, Number]:
    """
    Ótimo exato com datas de liberação

    Enumera atribuições (vetores lexicográficos) e, por máquina, todas as
    permutações com início mais cedo possível; o melhor valor por
    (máquina, conjunto) é memorizado.
    """
    limits = limits or OracleLimits.for_release()
    objective = ObjectiveKind(objective or limits.objective)
    _check_limits(instance, limits)
    delta = limits.delta if limits.delta is not None else instance.delta
    needs_delta = objective is ObjectiveKind.PSEUDO_COST or limits.timely_only
    if needs_delta and delta is None:
        raise UnsupportedInstanceError("pseudo-cost and timely search need delta")

    jobs = sorted(instance.jobs, key=lambda j: j.id)
    machines = list(instance.machines)
    if not jobs:
        return TimedSchedule({}), 0

    memo: Dict[Tuple[int, FrozenSet[int]], Tuple[Number, Tuple[int, ...], Tuple[Number, ...]]] = {}
    by_id = {j.id: j for j in jobs}

    def machine_value(pos: int, members: FrozenSet[int]):
        key = (pos, members)
        if key not in memo:
            memo[key] = _machine_value(
                [by_id[i] for i in members], machines[pos].speed, objective, limits.timely_only, delta
            )
        return memo[key]

    fastest = machines[0].speed
    optimistic = [job.weight * (job.release + job.size / fastest) for job in jobs]
    suffix = [0] * (len(jobs) + 1)
    for k in range(len(jobs) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + optimistic[k]

    members: List[List[int]] = [[] for _ in machines]
    best: Dict[str, object] = {"value": None, "members": None}
    clock = _Clock(limits.time_budget)

    def search(k: int, bound: Number) -> None:
        clock.tick()
        incumbent = best["value"]
        if limits.prune and incumbent is not None and bound + suffix[k] >= incumbent - tolerance(incumbent):
            return
        if k == len(jobs):
            value = sum((machine_value(pos, frozenset(ms))[0] for pos, ms in enumerate(members) if ms), 0)
            if incumbent is None or value < incumbent - tolerance(incumbent):
                best["value"], best["members"] = value, [list(ms) for ms in members]
            return
        job = jobs[k]
        for pos, machine in enumerate(machines):
            members[pos].append(job.id)
            search(k + 1, bound + job.weight * (job.release + job.size / machine.speed))
            members[pos].pop()

    search(0, 0)
    slots = {}
    for pos, ms in enumerate(best["members"]):
        if not ms:
            continue
        _, order, completions = machine_value(pos, frozenset(ms))
        for job_id, completion in zip(order, completions):
            slots[job_id] = Slot(machines[pos].id, completion)
    logger.debug(f"opt_release[{objective.value}]: n={instance.n}, m={instance.m}, valor={float(best['value']):.6g}")
    return TimedSchedule(slots), best["value"]

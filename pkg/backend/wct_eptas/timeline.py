#!/usr/bin/env python3
"""
Timeline - Release-Date Schedule Calculus

Cálculo de schedules com datas de liberação sobre os intervalos
J_{i,ℓ} = [(1+δ)^i, (1+δ)^{i+1}) de cada máquina:

- listas de intervalos e as quatro condições de representação
- time augmentation, schedules deslocados e time stretching com gaps
- classificação de jobs por intervalo e schedules organizados
- job shifting (Ã) e empacotamento de lotes por data de liberação

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .core import (
    DomainError,
    GeoValue,
    Instance,
    Job,
    Number,
    SchedulingError,
    Slot,
    StageLedger,
    TimedSchedule,
    geo_floor,
    geo_value,
    instance_hash,
    is_timely,
    machine_timeline,
    natural_order,
    pseudo_cost,
    resolve_delta,
    tolerance,
)
from .rounding import divisions

logger = logging.getLogger(__name__)


class ListConditionError(SchedulingError):
    """Lista de intervalos viola uma das quatro condições de representação"""

    def __init__(self, condition: int, machine: int, interval: int, detail: str = ""):
        message = f"list condition {condition} violated on machine {machine}, interval {interval}"
        super().__init__(f"{message}: {detail}" if detail else message)
        self.condition = condition
        self.machine = machine
        self.interval = interval


class JobClass(str, Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"
    HUGE = "huge"

    @property
    def is_big(self) -> bool:
        return self in (JobClass.MEDIUM, JobClass.LARGE)


def interval_of(t: Number, delta: Number) -> int:
    """Índice do intervalo de t; instantes a uma tolerância da borda pertencem ao intervalo seguinte"""
    e = geo_floor(t, delta)
    if geo_value(e + 1, delta) - t <= tolerance(t):
        return e + 1
    return e


# === INTERVALOS ===

@dataclass(frozen=True)
class IntervalKey:
    """J_{i,ℓ}; length é o tamanho processável Z = s_ℓ·δ·(1+δ)^i"""
    i: int
    machine: int
    speed: Number
    delta: Number
    theta: int = 0

    @classmethod
    def of(cls, instance: Instance, machine_id: int, i: int, delta: Optional[Number] = None, theta: int = 0):
        return cls(i, machine_id, instance.speed(machine_id), resolve_delta(instance, delta), theta)

    @property
    def start(self) -> Number:
        return geo_value(self.i, self.delta)

    @property
    def end(self) -> Number:
        return geo_value(self.i + 1, self.delta)

    @property
    def length(self) -> Number:
        return self.speed * self.delta * geo_value(self.i, self.delta)


@dataclass(frozen=True)
class IntervalEntry:
    machine: int
    start: int
    end: int


@dataclass
class IntervalList:
    """Por job: máquina, intervalo de início e intervalo de conclusão"""
    entries: Dict[int, IntervalEntry]
    delta: Number

    def machines(self) -> List[int]:
        return sorted({e.machine for e in self.entries.values()})

    def on_machine(self, machine: int) -> Dict[int, IntervalEntry]:
        return {jid: e for jid, e in self.entries.items() if e.machine == machine}

    def starts(self, machine: int, i: int) -> List[int]:
        return sorted(jid for jid, e in self.entries.items() if e.machine == machine and e.start == i)

    def completions(self, machine: int, i: int) -> List[int]:
        return sorted(jid for jid, e in self.entries.items() if e.machine == machine and e.end == i)

    def shifted(self, offset: int = 1) -> "IntervalList":
        return IntervalList(
            {jid: IntervalEntry(e.machine, e.start + offset, e.end + offset) for jid, e in self.entries.items()},
            self.delta,
        )

    def pseudo_cost(self, instance: Instance) -> Number:
        """Custo de J_{i,ℓ} = (1+δ)^{i+1} × peso dos jobs que terminam nele"""
        return sum(
            (instance.job(jid).weight * geo_value(e.end + 1, self.delta) for jid, e in self.entries.items()), 0
        )


def list_from_schedule(instance: Instance, schedule: TimedSchedule, delta: Optional[Number] = None) -> IntervalList:
    """
    Lista de intervalos de um schedule timely

    Todo job precisa começar depois de 0 (um schedule timely garante isso);
    um início em 0 não pertence a nenhum J_i.
    """
    delta = resolve_delta(instance, delta)
    entries: Dict[int, IntervalEntry] = {}
    for jid, slot in schedule.slots.items():
        start = schedule.start(instance, jid)
        if not start > 0:
            raise DomainError(
                f"job {jid} starts at {start}; interval lists need a timely schedule (every start > 0)"
            )
        entries[jid] = IntervalEntry(slot.machine, interval_of(start, delta), interval_of(slot.completion, delta))
    return IntervalList(entries, delta)


def check_list_conditions(lst: IntervalList, instance: Instance) -> None:
    """Levanta ListConditionError na primeira condição violada (1 a 4, nessa ordem)"""
    delta = lst.delta
    for jid, e in sorted(lst.entries.items()):
        job = instance.job(jid)
        if not instance.has_machine(e.machine):
            raise ListConditionError(1, e.machine, e.start, f"job {jid} on unknown machine")
        if e.end < e.start:
            raise ListConditionError(1, e.machine, e.start, f"job {jid} completes before it starts")
        if job.release > geo_value(e.start, delta) + tolerance(job.release):
            raise ListConditionError(1, e.machine, e.start, f"job {jid} starts before its release")

    for machine in lst.machines():
        own = lst.on_machine(machine)
        speed = instance.speed(machine)
        inner = [(e.start, e.end, instance.job(jid).size) for jid, e in own.items()]
        lo = min(e.start for e in own.values())
        hi = max(e.end for e in own.values())
        for first in range(lo, hi + 1):
            for last in range(first, hi + 1):
                total = sum((size for s, t, size in inner if s >= first and t <= last), 0)
                capacity = speed * (geo_value(last + 1, delta) - geo_value(first, delta))
                if total and not total < capacity:
                    raise ListConditionError(2, machine, last, f"size {float(total):.6g} fills intervals {first}..{last}")

        events: Dict[int, int] = defaultdict(int)
        for e in own.values():
            events[e.start] += 1
            events[e.end] += 1
        for jid, e in sorted(own.items()):
            for between in range(e.start + 1, e.end):
                if events.get(between):
                    raise ListConditionError(3, machine, between, f"event under spanning job {jid}")

        for i in range(lo, hi + 1):
            leaving = [jid for jid, e in own.items() if e.start == i and e.end > i]
            arriving = [jid for jid, e in own.items() if e.end == i and e.start < i]
            if len(leaving) > 1 or len(arriving) > 1:
                raise ListConditionError(4, machine, i, "more than one boundary-crossing job")


def schedule_from_list(lst: IntervalList, instance: Instance) -> TimedSchedule:
    """
    Varredura construtiva da lista para um schedule com o mesmo pseudo-custo

    Em cada intervalo com inícios: os jobs internos rodam em sequência a
    partir de max((1+δ)^i, última conclusão); o job que cruza a borda termina
    em max((1+δ)^{i″}, cursor + p/s).
    """
    check_list_conditions(lst, instance)
    delta = lst.delta
    slots: Dict[int, Slot] = {}
    for machine in lst.machines():
        speed = instance.speed(machine)
        own = lst.on_machine(machine)
        by_start: Dict[int, List[int]] = defaultdict(list)
        for jid, e in own.items():
            by_start[e.start].append(jid)
        last: Number = 0
        for i in range(min(by_start), max(by_start) + 1):
            group = by_start.get(i)
            if not group:
                continue
            cursor = max(geo_value(i, delta), last)
            for job in natural_order(instance.job(jid) for jid in group if own[jid].end == i):
                cursor = cursor + job.size / speed
                slots[job.id] = Slot(machine, cursor)
            for jid in sorted(jid for jid in group if own[jid].end > i):
                job = instance.job(jid)
                cursor = max(geo_value(own[jid].end, delta), cursor + job.size / speed)
                slots[jid] = Slot(machine, cursor)
            last = cursor
    return TimedSchedule(slots)


# === AUGMENTATION E DESLOCAMENTO ===

def time_augment(instance: Instance, schedule: TimedSchedule, upsilon: Number) -> TimedSchedule:
    """TA(SOL, υ): conclusões multiplicadas por υ, mesma máquina"""
    if not upsilon > 1:
        raise DomainError(f"augmentation factor must exceed 1, got {upsilon}")
    return TimedSchedule({jid: Slot(slot.machine, slot.completion * upsilon) for jid, slot in schedule.slots.items()})


def shift_schedule(lst: IntervalList) -> IntervalList:
    """S(SOL): todo índice de início e de conclusão sobe um intervalo"""
    return lst.shifted(1)


def stretched_instance(instance: Instance, delta: Optional[Number] = None) -> Instance:
    """Ā′: mesmos jobs e máquinas, tamanhos multiplicados por 1+δ"""
    delta = resolve_delta(instance, delta)
    jobs = []
    for job in instance.jobs:
        size_geo = GeoValue(job.size_exp + 1) if job.size_geo is not None else None
        jobs.append(replace(job, size=job.size * (1 + delta), size_geo=size_geo))
    return instance.with_jobs(jobs)


# === TIME STRETCHING ===

@dataclass(frozen=True)
class StretchedTimes:
    machine: int
    reserved_start: Number
    reserved_end: Number
    basic_start: Number
    basic_end: Number
    actual_start: Number
    actual_end: Number


@dataclass
class StretchedSchedule:
    """
    Schedule obtido por time stretching por 1+δ

    gaps guarda, para cada intervalo não contido em período reservado, o
    tamanho ocioso s·(tempo livre) medido nas posições reais.
    """
    times: Dict[int, StretchedTimes]
    original: TimedSchedule
    delta: Number
    gaps: Dict[Tuple[int, int], Number] = field(default_factory=dict)
    ledger: StageLedger = field(default_factory=StageLedger)

    def timed(self) -> TimedSchedule:
        return TimedSchedule({jid: Slot(t.machine, t.actual_end) for jid, t in self.times.items()})

    def covered(self, machine: int, i: int) -> bool:
        """J_{i,ℓ} está contido no período reservado de algum job"""
        lo, hi = geo_value(i, self.delta), geo_value(i + 1, self.delta)
        return any(
            t.machine == machine and t.reserved_start <= lo and t.reserved_end >= hi for t in self.times.values()
        )

    def has_gap(self, machine: int, i: int) -> bool:
        return (machine, i) in self.gaps


def _busy(intervals: Iterable[Tuple[Number, Number]], lo: Number, hi: Number) -> Number:
    total: Number = 0
    for a, b in intervals:
        overlap = min(b, hi) - max(a, lo)
        if overlap > 0:
            total = total + overlap
    return total


def time_stretch(instance: Instance, schedule: TimedSchedule, delta: Optional[Number] = None) -> StretchedSchedule:
    """
    Time stretching por um fator 1+δ

    Cada job em [t, t′) reserva [(1+δ)t, (1+δ)t′) e ganha início básico
    (1+δ)t + δp/(2s). Em cada intervalo fora de períodos reservados, os jobs
    do intervalo (internos e os pequenos que cruzam a borda) rodam o mais
    cedo possível, logo depois da conclusão básica do job que chega de um
    intervalo anterior.
    """
    delta = resolve_delta(instance, delta)
    timely, witness = is_timely(schedule, instance, delta)
    if not timely:
        raise DomainError(f"time stretching needs a timely schedule; job {witness} starts too early")

    ledger = StageLedger(instance_hash(instance))
    factor = 1 + delta
    small_factor = delta ** 11
    times: Dict[int, StretchedTimes] = {}
    gaps: Dict[Tuple[int, int], Number] = {}

    for machine in instance.machines:
        speed = machine.speed
        segments = machine_timeline(instance, schedule, machine.id)
        if not segments:
            continue
        basic: Dict[int, StretchedTimes] = {}
        for start, end, jid in segments:
            offset = delta * instance.job(jid).size / (2 * speed)
            rs, re = factor * start, factor * end
            basic[jid] = StretchedTimes(machine.id, rs, re, rs + offset, re - offset, rs + offset, re - offset)
        start_of = {jid: interval_of(t.reserved_start, delta) for jid, t in basic.items()}
        end_of = {jid: interval_of(t.reserved_end, delta) for jid, t in basic.items()}
        lo, hi = min(start_of.values()), max(end_of.values())

        def covered(i: int) -> bool:
            a, b = geo_value(i, delta), geo_value(i + 1, delta)
            return any(t.reserved_start <= a and t.reserved_end >= b for t in basic.values())

        actual = dict(basic)
        for i in range(lo, hi + 1):
            if covered(i):
                continue
            threshold = small_factor * speed * geo_value(i, delta)
            members = [
                jid for jid in basic
                if start_of[jid] == i and (end_of[jid] == i or instance.job(jid).size < threshold)
            ]
            arriving = [basic[jid].basic_end for jid in basic if start_of[jid] < i and end_of[jid] == i]
            cursor = max([geo_value(i, delta)] + arriving)
            for jid in sorted(members, key=lambda j: basic[j].basic_start):
                job = instance.job(jid)
                begin = max(cursor, job.release)
                cursor = begin + job.size / speed
                actual[jid] = replace(basic[jid], actual_start=begin, actual_end=cursor)

        runs = [(t.actual_start, t.actual_end) for t in actual.values()]
        for i in range(lo, hi + 1):
            if covered(i):
                continue
            a, b = geo_value(i, delta), geo_value(i + 1, delta)
            idle = speed * ((b - a) - _busy(runs, a, b))
            gaps[(machine.id, i)] = idle
            z = speed * delta * geo_value(i, delta)
            ledger.audit("time_stretch", f"gap >= delta^3 Z on machine {machine.id}, interval {i}",
                         delta ** 3 * z, idle)
        times.update(actual)

    stretched = StretchedSchedule(times, schedule, delta, gaps, ledger)
    timed = stretched.timed()
    before = pseudo_cost(schedule, instance, delta).total
    after = pseudo_cost(timed, instance, delta).total
    ledger.audit("time_stretch", "pseudo-cost <= (1+delta) input", after, factor * before, cost=float(after))

    stranded = 0
    for jid, t in times.items():
        i = interval_of(t.actual_start, delta)
        key = IntervalKey(i, t.machine, instance.speed(t.machine), delta)
        if classify_job(instance.job(jid).size, key) is JobClass.SMALL and interval_of(t.actual_end, delta) != i:
            stranded += 1
    ledger.audit("time_stretch", "small jobs complete in their start interval", stranded, 0)
    logger.debug(f"time_stretch: {len(times)} jobs, {len(gaps)} intervalos com gap")
    return stretched


def next_gap_within(stretched: StretchedSchedule, machine: int, i: int) -> Optional[int]:
    """
    Primeiro intervalo com gap dentro de [(1+δ)^{i+1}, (1+δ)^i/δ²)

    Um intervalo fora de todo período reservado tem gap; devolve seu índice
    ou None quando a janela não contém nenhum.
    """
    delta = stretched.delta
    limit = geo_value(i, delta) / (delta * delta)
    q = i + 1
    while geo_value(q + 1, delta) <= limit:
        if not stretched.covered(machine, q):
            return q
        q += 1
    return None


# === CLASSIFICAÇÃO E SCHEDULES ORGANIZADOS ===

def classify_job(size: Number, key: IntervalKey) -> JobClass:
    """
    Classe de um tamanho para J_{i,ℓ}

    A faixa [s·δ(1+δ)^i, s(1+δ)^i), sem nome na definição, conta como medium.
    """
    base = key.speed * geo_value(key.i, key.delta)
    if size < key.delta ** 11 * base:
        return JobClass.SMALL
    if size < base:
        return JobClass.MEDIUM
    if size < key.speed / key.delta * geo_value(key.i + 1, key.delta):
        return JobClass.LARGE
    return JobClass.HUGE


@dataclass(frozen=True)
class OrganizedWitness:
    condition: str
    first: int
    second: Optional[int] = None


def _release_key(job: Job) -> Number:
    return job.release_exp if job.release_geo is not None else job.release


def is_organized(
    instance: Instance, schedule: TimedSchedule, delta: Optional[Number] = None
) -> Tuple[bool, Optional[OrganizedWitness]]:
    """Schedule para A″ é timely e satisfaz as condições 1 e 2(a)–(c)"""
    delta = resolve_delta(instance, delta)
    timely, witness = is_timely(schedule, instance, delta)
    if not timely:
        return False, OrganizedWitness("timely", witness)
    lst = list_from_schedule(instance, schedule, delta)

    for jid, e in sorted(lst.entries.items()):
        key = IntervalKey.of(instance, e.machine, e.start, delta)
        if classify_job(instance.job(jid).size, key) is JobClass.SMALL and e.end != e.start:
            return False, OrganizedWitness("1", jid)

    groups: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for job in instance.jobs:
        groups[(divisions(job.size_exp, delta).division, job.density_exp)].append(job.id)

    for members in groups.values():
        order = sorted(members, key=lambda j: (lst.entries[j].start, instance.machine_index(lst.entries[j].machine)))
        for a, j1 in enumerate(order):
            e1 = lst.entries[j1]
            first = instance.job(j1)
            for j2 in order[a + 1:]:
                e2 = lst.entries[j2]
                if (e2.start, instance.machine_index(e2.machine)) == (e1.start, instance.machine_index(e1.machine)):
                    continue
                second = instance.job(j2)
                if second.release > geo_value(e1.start, delta) + tolerance(second.release):
                    continue
                if first.size_exp < second.size_exp:
                    key = IntervalKey.of(instance, e1.machine, e1.start, delta)
                    if classify_job(second.size, key) is JobClass.SMALL:
                        return False, OrganizedWitness("2a", j1, j2)
                elif first.size_exp == second.size_exp:
                    if _release_key(second) < _release_key(first):
                        return False, OrganizedWitness("2b", j1, j2)
                    if _release_key(second) == _release_key(first) and j2 > j1:
                        return False, OrganizedWitness("2c", j1, j2)
    return True, None


def organize(
    instance: Instance, schedule: TimedSchedule, delta: Optional[Number] = None, stretch: bool = True
) -> TimedSchedule:
    """
    Reparo best-effort para fixtures de teste

    Opcionalmente aplica time stretching (condição 1) e depois, para cada
    par (tamanho, densidade), redistribui os jobs pelos slots ordenados por
    intervalo: liberação não-decrescente, índice decrescente.
    """
    delta = resolve_delta(instance, delta)
    if stretch:
        schedule = time_stretch(instance, schedule, delta).timed()
    lst = list_from_schedule(instance, schedule, delta)
    groups: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for job in instance.jobs:
        groups[(job.size_exp, job.density_exp)].append(job.id)
    slots = dict(schedule.slots)
    for members in groups.values():
        positions = sorted(
            members,
            key=lambda j: (lst.entries[j].start, instance.machine_index(lst.entries[j].machine), schedule.slots[j].completion),
        )
        ranked = sorted(members, key=lambda j: (_release_key(instance.job(j)), -j))
        for target, jid in zip(positions, ranked):
            slots[jid] = schedule.slots[target]
    return TimedSchedule(slots)


# === JOB SHIFTING ===

@dataclass
class JobShiftResult:
    """Ã mais a máquina para a qual cada job foi selecionado"""
    instance: Instance
    selected_for: Dict[int, int]
    selected_size: Dict[Tuple[int, int, int], Number]
    ledger: StageLedger


def _inverse_delta(delta: Number) -> int:
    return int(round(1 / float(delta)))


def job_shift(instance: Instance, delta: Optional[Number] = None) -> JobShiftResult:
    """
    Instância Ã com datas de liberação modificadas

    Por densidade e por i crescente, entre os jobs com r_j = (1+δ)^i, cada
    J_{i,ℓ} seleciona: 1 job por tamanho grande, 1 + 1/δ^{10} por tamanho
    médio, e jobs pequenos por divisão até somar s_ℓδ(1+δ)^i. Os demais
    passam a r_j = (1+δ)^{i+1}. Prioridade: liberação original crescente,
    depois índice decrescente.
    """
    delta = resolve_delta(instance, delta)
    if any(j.release_geo is None or not j.is_rounded for j in instance.jobs):
        raise DomainError("job shifting needs a rounded release-date instance")
    medium_quota = 1 + _inverse_delta(delta) ** 10
    ledger = StageLedger(instance_hash(instance))
    final_release: Dict[int, int] = {}
    selected_for: Dict[int, int] = {}
    selected_size: Dict[Tuple[int, int, int], Number] = defaultdict(int)
    priority = {j.id: (j.release_exp, -j.id) for j in instance.jobs}

    by_density: Dict[int, List[Job]] = defaultdict(list)
    for job in instance.jobs:
        by_density[job.density_exp].append(job)

    for d, jobs in sorted(by_density.items()):
        current = {j.id: j.release_exp for j in jobs}
        pending = {j.id: j for j in jobs}
        while pending:
            i = min(current[jid] for jid in pending)
            candidates = sorted((jid for jid in pending if current[jid] == i), key=priority.__getitem__)
            chosen: Set[int] = set()
            for machine in instance.machines:
                key = IntervalKey(i, machine.id, machine.speed, delta)
                z = key.length
                free = [jid for jid in candidates if jid not in chosen]
                picks: List[int] = []
                by_size: Dict[int, List[int]] = defaultdict(list)
                for jid in free:
                    by_size[pending[jid].size_exp].append(jid)
                small_by_division: Dict[int, List[int]] = defaultdict(list)
                for size_exp, group in sorted(by_size.items(), reverse=True):
                    cls = classify_job(pending[group[0]].size, key)
                    if cls is JobClass.LARGE:
                        picks.extend(group[:1])
                    elif cls is JobClass.MEDIUM:
                        picks.extend(group[:medium_quota])
                    elif cls is JobClass.SMALL:
                        small_by_division[divisions(size_exp, delta).division].extend(group)
                for division, group in sorted(small_by_division.items()):
                    total: Number = 0
                    for jid in group:
                        if total >= z:
                            break
                        picks.append(jid)
                        total = total + pending[jid].size
                for jid in picks:
                    chosen.add(jid)
                    selected_for[jid] = machine.id
                    selected_size[(d, i, machine.id)] += pending[jid].size
                if picks:
                    ledger.audit("job_shift", f"selected size <= Z/delta^23 (d={d}, i={i}, machine={machine.id})",
                                 selected_size[(d, i, machine.id)], z / delta ** 23)
            for jid in candidates:
                if jid in chosen:
                    final_release[jid] = i
                    del pending[jid]
                else:
                    current[jid] = i + 1

    jobs = [
        replace(j, release=geo_value(final_release[j.id], delta), release_geo=GeoValue(final_release[j.id]))
        for j in instance.jobs
    ]
    moved = sum(1 for j in instance.jobs if final_release[j.id] != j.release_exp)
    logger.debug(f"job_shift: {moved} de {instance.n} jobs com liberação adiada")
    return JobShiftResult(instance.with_jobs(jobs), selected_for, dict(selected_size), ledger)


def pack_release_batch(
    instance: Instance,
    shift: JobShiftResult,
    release_exp: int,
    start: Number,
    cumulative: bool = False,
    y_hat: Optional[int] = None,
    ledger: Optional[StageLedger] = None,
) -> TimedSchedule:
    """
    Empacota os jobs com r_j = r (ou r_j ≤ r, cumulative) a partir de t

    Cada job roda na máquina para a qual foi selecionado. Término em até
    t + rŷ/δ^{22} (ou t + rŷ(1+δ)/δ^{23} na forma cumulativa).
    """
    delta = resolve_delta(instance, None)
    r = geo_value(release_exp, delta)
    if start + tolerance(start) < r:
        raise DomainError(f"batch start {start} precedes its release {r}")
    jobs = [
        j for j in instance.jobs
        if j.release_exp == release_exp or (cumulative and j.release_exp < release_exp)
    ]
    densities = {j.density_exp for j in jobs}
    if y_hat is not None and len(densities) > y_hat:
        raise DomainError(f"batch spans {len(densities)} densities, more than {y_hat}")
    missing = [j.id for j in jobs if j.id not in shift.selected_for]
    if missing:
        raise DomainError(f"job {missing[0]} has no selection machine")
    if not jobs:
        return TimedSchedule({})

    per_machine: Dict[int, List[Job]] = defaultdict(list)
    for job in jobs:
        per_machine[shift.selected_for[job.id]].append(job)
    slots: Dict[int, Slot] = {}
    finish = start
    for machine_id, members in sorted(per_machine.items()):
        speed = instance.speed(machine_id)
        cursor = start
        for job in natural_order(members):
            cursor = max(cursor, job.release) + job.size / speed
            slots[job.id] = Slot(machine_id, cursor)
        finish = max(finish, cursor)

    count = y_hat if y_hat is not None else len(densities)
    if cumulative:
        bound = start + r * count * (1 + delta) / delta ** 23
    else:
        bound = start + r * count / delta ** 22
    if ledger is not None:
        ledger.audit("pack_release_batch", "finish <= batch bound", finish, bound)
    return TimedSchedule(slots)


def truncation_horizon(max_release: Number, y_hat: int, delta: Number) -> int:
    """Expoente ι da menor potência T = (1+δ)^ι acima de ŷR/δ^{24}"""
    return geo_floor(y_hat * max_release / delta ** 24, delta) + 1


def truncate_horizon(
    instance: Instance,
    schedule: TimedSchedule,
    shift: JobShiftResult,
    horizon_exp: int,
    ledger: Optional[StageLedger] = None,
) -> TimedSchedule:
    """
    Remove os jobs que terminam depois de T e os reempacota a partir de T

    Cada job removido volta à máquina de seleção; todo job reempacotado
    deve terminar antes de (1+δ)T para não piorar seu pseudo-custo.
    """
    delta = resolve_delta(instance, None)
    horizon = geo_value(horizon_exp, delta)
    late = [jid for jid, slot in schedule.slots.items() if slot.completion > horizon + tolerance(horizon)]
    if not late:
        return schedule
    slots = {jid: slot for jid, slot in schedule.slots.items() if jid not in set(late)}
    per_machine: Dict[int, List[Job]] = defaultdict(list)
    for jid in late:
        machine = shift.selected_for.get(jid, schedule.slots[jid].machine)
        per_machine[machine].append(instance.job(jid))
    latest = horizon
    for machine_id, members in sorted(per_machine.items()):
        speed = instance.speed(machine_id)
        cursor = horizon
        for job in natural_order(members):
            cursor = max(cursor, job.release) + job.size / speed
            slots[job.id] = Slot(machine_id, cursor)
        latest = max(latest, cursor)
    if ledger is not None:
        ledger.audit("truncate_horizon", "repacked jobs finish before (1+delta) T", latest, (1 + delta) * horizon)
    logger.debug(f"truncate_horizon: {len(late)} jobs reempacotados a partir de T=(1+δ)^{horizon_exp}")
    return TimedSchedule(slots)

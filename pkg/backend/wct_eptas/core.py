#!/usr/bin/env python3
"""
Scheduling Core - Related Machines, Weighted Completion Time

Modelo de dados para jobs e máquinas uniformemente relacionadas, as três
representações de schedule e todos os funcionais de custo usados pelos
esquemas de aproximação:

- custo real (soma ponderada dos tempos de conclusão)
- valores Γ (custo medido na metade da execução)
- U-cost (funcional misto por máquina)
- pseudo-custo (conclusão arredondada para a próxima potência de 1+δ)

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]

ABS_TOL = 1e-9
REL_TOL = 1e-9


# === ERROS ===

class SchedulingError(ValueError):
    """Erro base do pacote"""


class DomainError(SchedulingError):
    """Argumento fora do domínio da operação"""


class UnsupportedInstanceError(SchedulingError):
    """Instância fora do escopo do solver"""


class ScheduleError(SchedulingError):
    """Schedule inválido para a instância"""

    def __init__(self, message: str, job_id: Optional[int] = None, machine_id: Optional[int] = None):
        super().__init__(message)
        self.job_id = job_id
        self.machine_id = machine_id


class InstanceFormatError(SchedulingError):
    """Texto de instância ou schedule malformado"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def tolerance(reference: Number) -> float:
    """Tolerância absoluta + relativa em torno de um valor de referência"""
    return ABS_TOL + REL_TOL * abs(float(reference))


def approx_le(a: Number, b: Number) -> bool:
    return a <= b + tolerance(b)


# === POTÊNCIAS DE (1+δ) ===

@lru_cache(maxsize=262144)
def _float_power(exponent: int, delta: float) -> float:
    return math.pow(1.0 + delta, exponent)


def geo_value(exponent: int, delta: Number) -> Number:
    """(1+δ)^exponent; exato quando δ é Fraction"""
    if isinstance(delta, Fraction):
        return (1 + delta) ** int(exponent)
    return _float_power(int(exponent), float(delta))


def geo_floor(x: Number, delta: Number) -> int:
    """Maior e com (1+δ)^e ≤ x"""
    if not x > 0:
        raise DomainError(f"logarithm of nonpositive value {x}")
    e = math.floor(math.log(float(x)) / math.log1p(float(delta)))
    while geo_value(e, delta) > x:
        e -= 1
    while geo_value(e + 1, delta) <= x:
        e += 1
    return e


def geo_ceil(x: Number, delta: Number) -> int:
    """Menor e com x ≤ (1+δ)^e"""
    if not x > 0:
        raise DomainError(f"logarithm of nonpositive value {x}")
    e = math.ceil(math.log(float(x)) / math.log1p(float(delta)))
    while geo_value(e - 1, delta) >= x:
        e -= 1
    while geo_value(e, delta) < x:
        e += 1
    return e


@dataclass(frozen=True, order=True)
class GeoValue:
    """Potência exata de (1+δ), guardada pelo expoente inteiro"""
    exponent: int

    def __mul__(self, other: "GeoValue") -> "GeoValue":
        return GeoValue(self.exponent + other.exponent)

    def __truediv__(self, other: "GeoValue") -> "GeoValue":
        return GeoValue(self.exponent - other.exponent)

    def __pow__(self, power: int) -> "GeoValue":
        return GeoValue(self.exponent * int(power))

    def value(self, delta: Number) -> Number:
        return geo_value(self.exponent, delta)

    @classmethod
    def ceil(cls, x: Number, delta: Number) -> "GeoValue":
        return cls(geo_ceil(x, delta))

    @classmethod
    def floor(cls, x: Number, delta: Number) -> "GeoValue":
        return cls(geo_floor(x, delta))


# === DADOS DO PROBLEMA ===

@dataclass(frozen=True)
class Job:
    """Job com tamanho, peso e data de liberação (brutos ou arredondados)"""
    id: int
    size: Number
    weight: Number
    release: Number = 0
    size_geo: Optional[GeoValue] = None
    weight_geo: Optional[GeoValue] = None
    release_geo: Optional[GeoValue] = None

    def __post_init__(self):
        if not self.size > 0:
            raise DomainError(f"job {self.id}: size must be positive, got {self.size}")
        if not self.weight > 0:
            raise DomainError(f"job {self.id}: weight must be positive, got {self.weight}")
        if self.release < 0:
            raise DomainError(f"job {self.id}: release must be nonnegative, got {self.release}")

    @property
    def density(self) -> Number:
        return self.weight / self.size

    @property
    def size_exp(self) -> Optional[int]:
        return None if self.size_geo is None else self.size_geo.exponent

    @property
    def weight_exp(self) -> Optional[int]:
        return None if self.weight_geo is None else self.weight_geo.exponent

    @property
    def release_exp(self) -> Optional[int]:
        return None if self.release_geo is None else self.release_geo.exponent

    @property
    def density_exp(self) -> Optional[int]:
        if self.size_geo is None or self.weight_geo is None:
            return None
        return self.weight_geo.exponent - self.size_geo.exponent

    @property
    def is_rounded(self) -> bool:
        return self.size_geo is not None and self.weight_geo is not None


@dataclass(frozen=True)
class Machine:
    id: int
    speed: Number
    speed_geo: Optional[GeoValue] = None

    def __post_init__(self):
        if not self.speed > 0:
            raise DomainError(f"machine {self.id}: speed must be positive, got {self.speed}")

    @property
    def speed_exp(self) -> Optional[int]:
        return None if self.speed_geo is None else self.speed_geo.exponent


@dataclass(frozen=True)
class Instance:
    """
    Instância do problema

    As máquinas ficam ordenadas por velocidade não-crescente (empate por id);
    o índice de uma máquina (1-based) é sua posição nessa ordem.
    """
    jobs: Tuple[Job, ...]
    machines: Tuple[Machine, ...]
    has_release_dates: bool = False
    delta: Optional[Number] = None

    def __post_init__(self):
        jobs = tuple(self.jobs)
        machines = tuple(sorted(self.machines, key=lambda mc: (-mc.speed, mc.id)))
        if not machines:
            raise DomainError("instance needs at least one machine")
        if len({j.id for j in jobs}) != len(jobs):
            raise DomainError("duplicate job ids")
        if len({mc.id for mc in machines}) != len(machines):
            raise DomainError("duplicate machine ids")
        object.__setattr__(self, "jobs", jobs)
        object.__setattr__(self, "machines", machines)

    @cached_property
    def _jobs_by_id(self) -> Dict[int, Job]:
        return {j.id: j for j in self.jobs}

    @cached_property
    def _machines_by_id(self) -> Dict[int, Machine]:
        return {mc.id: mc for mc in self.machines}

    @cached_property
    def _index_by_id(self) -> Dict[int, int]:
        return {mc.id: pos + 1 for pos, mc in enumerate(self.machines)}

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def m(self) -> int:
        return len(self.machines)

    def job(self, job_id: int) -> Job:
        try:
            return self._jobs_by_id[job_id]
        except KeyError:
            raise ScheduleError(f"unknown job {job_id}", job_id=job_id) from None

    def machine(self, machine_id: int) -> Machine:
        try:
            return self._machines_by_id[machine_id]
        except KeyError:
            raise ScheduleError(f"unknown machine {machine_id}", machine_id=machine_id) from None

    def has_job(self, job_id: int) -> bool:
        return job_id in self._jobs_by_id

    def has_machine(self, machine_id: int) -> bool:
        return machine_id in self._machines_by_id

    def speed(self, machine_id: int) -> Number:
        return self.machine(machine_id).speed

    def machine_index(self, machine_id: int) -> int:
        self.machine(machine_id)
        return self._index_by_id[machine_id]

    def machine_at(self, index: int) -> Machine:
        return self.machines[index - 1]

    @property
    def is_rounded(self) -> bool:
        return all(j.is_rounded for j in self.jobs) and all(mc.speed_geo is not None for mc in self.machines)

    @property
    def max_release(self) -> Number:
        return max((j.release for j in self.jobs), default=0)

    def with_jobs(self, jobs: Iterable[Job]) -> "Instance":
        return Instance(tuple(jobs), self.machines, self.has_release_dates, self.delta)

    def subset(self, job_ids: Iterable[int]) -> "Instance":
        wanted = set(job_ids)
        return self.with_jobs(j for j in self.jobs if j.id in wanted)


# === SCHEDULES ===

@dataclass(frozen=True)
class OrderedSchedule:
    """Por máquina, a lista ordenada de jobs executados back-to-back a partir de 0"""
    sequences: Mapping[int, Tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(
            self, "sequences", {mid: tuple(seq) for mid, seq in sorted(dict(self.sequences).items())}
        )

    def job_ids(self) -> List[int]:
        return [jid for seq in self.sequences.values() for jid in seq]

    def machine_of(self, job_id: int) -> Optional[int]:
        for mid, seq in self.sequences.items():
            if job_id in seq:
                return mid
        return None


@dataclass(frozen=True)
class Slot:
    machine: int
    completion: Number


@dataclass(frozen=True)
class TimedSchedule:
    """Por job, a máquina e o tempo de conclusão; slots semi-abertos [C − p/s, C)"""
    slots: Mapping[int, Slot]

    def __post_init__(self):
        object.__setattr__(self, "slots", dict(sorted(dict(self.slots).items())))

    def start(self, instance: Instance, job_id: int) -> Number:
        slot = self.slots[job_id]
        return slot.completion - instance.job(job_id).size / instance.speed(slot.machine)

    def machine_jobs(self, machine_id: int) -> List[int]:
        """Jobs de uma máquina em ordem de conclusão"""
        on = [(slot.completion, jid) for jid, slot in self.slots.items() if slot.machine == machine_id]
        return [jid for _, jid in sorted(on)]

    def sequences(self) -> Dict[int, Tuple[int, ...]]:
        machines = sorted({slot.machine for slot in self.slots.values()})
        return {mid: tuple(self.machine_jobs(mid)) for mid in machines}

    def merged(self, other: "TimedSchedule") -> "TimedSchedule":
        overlap = set(self.slots) & set(other.slots)
        if overlap:
            raise ScheduleError(f"job {min(overlap)} scheduled twice", job_id=min(overlap))
        return TimedSchedule({**self.slots, **other.slots})


def machine_timeline(instance: Instance, schedule: TimedSchedule, machine_id: int) -> List[Tuple[Number, Number, int]]:
    """Lista (início, fim, job) de uma máquina ordenada por início"""
    speed = instance.speed(machine_id)
    out = []
    for jid, slot in schedule.slots.items():
        if slot.machine == machine_id:
            job = instance.job(jid)
            out.append((slot.completion - job.size / speed, slot.completion, jid))
    out.sort()
    return out


class CostKind(Enum):
    """Funcional usado em um CostReport"""
    COST = "cost"
    GAMMA = "gamma"
    U_COST = "u_cost"
    PSEUDO = "pseudo_cost"


@dataclass(frozen=True)
class CostReport:
    total: Number
    contributions: Mapping[int, Number]
    per_interval: Mapping[int, Number] = field(default_factory=dict)
    kind: CostKind = CostKind.COST

    def __post_init__(self):
        summed = sum(self.contributions.values(), 0)
        if abs(summed - self.total) > tolerance(summed):
            raise DomainError(f"cost total {self.total} differs from contributions {summed}")

    @classmethod
    def from_contributions(
        cls,
        contributions: Mapping[int, Number],
        kind: CostKind = CostKind.COST,
        per_interval: Optional[Mapping[int, Number]] = None,
    ) -> "CostReport":
        contributions = dict(sorted(contributions.items()))
        return cls(sum(contributions.values(), 0), contributions, dict(per_interval or {}), kind)


# === ORDEM NATURAL ===

def natural_key(job: Job) -> Tuple:
    """Densidade não-crescente, depois tamanho não-crescente, depois id crescente"""
    density = job.density_exp if job.density_exp is not None else job.density
    size = job.size_exp if job.size_geo is not None else job.size
    return (-density, -size, job.id)


def natural_order(jobs: Iterable[Job]) -> List[Job]:
    return sorted(jobs, key=natural_key)


# === VALIDAÇÃO ===

def validate_ordered(instance: Instance, schedule: OrderedSchedule) -> None:
    seen: Dict[int, int] = {}
    for machine_id, seq in schedule.sequences.items():
        if not instance.has_machine(machine_id):
            raise ScheduleError(f"unknown machine {machine_id}", machine_id=machine_id)
        for job_id in seq:
            if not instance.has_job(job_id):
                raise ScheduleError(f"unknown job {job_id} on machine {machine_id}", job_id, machine_id)
            if job_id in seen:
                raise ScheduleError(
                    f"job {job_id} appears on machines {seen[job_id]} and {machine_id}", job_id, machine_id
                )
            seen[job_id] = machine_id
    missing = sorted(j.id for j in instance.jobs if j.id not in seen)
    if missing:
        raise ScheduleError(f"job {missing[0]} is not scheduled", job_id=missing[0])


def validate_timed(instance: Instance, schedule: TimedSchedule) -> None:
    for job_id, slot in schedule.slots.items():
        if not instance.has_job(job_id):
            raise ScheduleError(f"unknown job {job_id}", job_id=job_id)
        if not instance.has_machine(slot.machine):
            raise ScheduleError(f"job {job_id} on unknown machine {slot.machine}", job_id, slot.machine)
    missing = sorted(j.id for j in instance.jobs if j.id not in schedule.slots)
    if missing:
        raise ScheduleError(f"job {missing[0]} is not scheduled", job_id=missing[0])

    for machine in instance.machines:
        previous_end: Optional[Number] = None
        previous_job: Optional[int] = None
        for start, end, job_id in machine_timeline(instance, schedule, machine.id):
            job = instance.job(job_id)
            if start < -tolerance(end):
                raise ScheduleError(f"job {job_id} starts before time 0", job_id, machine.id)
            if start + tolerance(end) < job.release:
                raise ScheduleError(
                    f"job {job_id} starts at {float(start):.6g} before its release {float(job.release):.6g}",
                    job_id,
                    machine.id,
                )
            if previous_end is not None and previous_end > start + tolerance(end):
                raise ScheduleError(
                    f"jobs {previous_job} and {job_id} overlap on machine {machine.id}", job_id, machine.id
                )
            previous_end, previous_job = end, job_id


def validate(instance: Instance, schedule: Union[OrderedSchedule, TimedSchedule]) -> None:
    if isinstance(schedule, OrderedSchedule):
        validate_ordered(instance, schedule)
    elif isinstance(schedule, TimedSchedule):
        validate_timed(instance, schedule)
    else:
        raise TypeError(f"not a schedule: {type(schedule).__name__}")


# === FUNCIONAIS DE CUSTO ===

def completion_times(instance: Instance, schedule: OrderedSchedule) -> Dict[int, Number]:
    """Somas de prefixo divididas pela velocidade (datas de liberação ignoradas)"""
    validate_ordered(instance, schedule)
    out: Dict[int, Number] = {}
    for machine_id, seq in schedule.sequences.items():
        speed = instance.speed(machine_id)
        load: Number = 0
        for job_id in seq:
            load = load + instance.job(job_id).size
            out[job_id] = load / speed
    return out


def to_timed(instance: Instance, schedule: OrderedSchedule) -> TimedSchedule:
    completions = completion_times(instance, schedule)
    return TimedSchedule({jid: Slot(schedule.machine_of(jid), c) for jid, c in completions.items()})


def cost(instance: Instance, schedule: Union[OrderedSchedule, TimedSchedule]) -> CostReport:
    """Σ w_j C_j"""
    if isinstance(schedule, OrderedSchedule):
        completions = completion_times(instance, schedule)
    elif isinstance(schedule, TimedSchedule):
        validate_timed(instance, schedule)
        completions = {jid: slot.completion for jid, slot in schedule.slots.items()}
    else:
        raise TypeError(f"not a schedule: {type(schedule).__name__}")
    contributions = {jid: instance.job(jid).weight * c for jid, c in completions.items()}
    return CostReport.from_contributions(contributions, CostKind.COST)


def gamma_value(job: Job, completion: Number, speed: Number) -> Number:
    """Γ_j = w_j (C_j − p_j/(2s))"""
    processing = job.size / speed
    if completion + tolerance(processing) < processing:
        raise DomainError(f"job {job.id}: completion {completion} before its processing time {processing}")
    return job.weight * (completion - job.size / (2 * speed))


def gamma_sum(jobs: Sequence[Job], speed: Number, start: Number = 0) -> Number:
    """Soma dos Γ dos jobs executados back-to-back a partir de start"""
    t = start
    total: Number = 0
    for job in jobs:
        t = t + job.size / speed
        total = total + gamma_value(job, t, speed)
    return total


def gamma_lower_bound(jobs: Iterable[Job], machine: Machine) -> Number:
    """φΦ²/(2v): Φ tamanho total, φ densidade mínima"""
    jobs = list(jobs)
    if not jobs:
        return 0
    total = sum((j.size for j in jobs), 0)
    phi = min(j.density for j in jobs)
    return phi * total * total / (2 * machine.speed)


def block_gamma(total_size: Number, density: Number, start: Number, speed: Number) -> Number:
    """Soma dos Γ de um bloco consecutivo de densidade única"""
    if total_size < 0:
        raise DomainError(f"negative block size {total_size}")
    return density * (start + total_size / (2 * speed)) * total_size


def u_cost(jobs: Sequence[Job], threshold: Number, speed: Number, start: Number = 0) -> Number:
    """Custo completo para jobs ≥ U, valor Γ para jobs < U"""
    if not threshold > 0:
        raise DomainError(f"U-cost threshold must be positive, got {threshold}")
    t = start
    total: Number = 0
    for job in jobs:
        t = t + job.size / speed
        if job.size >= threshold:
            total = total + job.weight * t
        else:
            total = total + gamma_value(job, t, speed)
    return total


def resolve_delta(instance: Instance, delta: Optional[Number]) -> Number:
    if delta is not None:
        return delta
    if instance.delta is None:
        raise DomainError("delta is required for interval-based functionals")
    return instance.delta


def interval_index(time: Number, delta: Number) -> int:
    """Índice i com time ∈ [(1+δ)^i, (1+δ)^{i+1})"""
    return geo_floor(time, delta)


def pseudo_cost(schedule: TimedSchedule, instance: Instance, delta: Optional[Number] = None) -> CostReport:
    """Cada job com C_j ∈ [(1+δ)^i,(1+δ)^{i+1}) contribui w_j (1+δ)^{i+1}"""
    delta = resolve_delta(instance, delta)
    validate_timed(instance, schedule)
    contributions: Dict[int, Number] = {}
    per_interval: Dict[int, Number] = defaultdict(int)
    for job_id, slot in schedule.slots.items():
        if not slot.completion > 0:
            raise DomainError(f"job {job_id}: nonpositive completion time {slot.completion}")
        i = interval_index(slot.completion, delta)
        value = instance.job(job_id).weight * geo_value(i + 1, delta)
        contributions[job_id] = value
        per_interval[i] += value
    return CostReport.from_contributions(contributions, CostKind.PSEUDO, per_interval)


def is_timely(schedule: TimedSchedule, instance: Instance, delta: Optional[Number] = None) -> Tuple[bool, Optional[int]]:
    """Todo job começa no mínimo em δ·p_j/s_i; devolve o primeiro job violador"""
    delta = resolve_delta(instance, delta)
    for job_id, slot in schedule.slots.items():
        job = instance.job(job_id)
        processing = job.size / instance.speed(slot.machine)
        start = slot.completion - processing
        if start + tolerance(slot.completion) < delta * processing:
            return False, job_id
    return True, None


def realize(
    instance: Instance,
    sequences: Mapping[int, Sequence[int]],
    timely_delta: Optional[Number] = None,
    not_before: Optional[Mapping[int, Number]] = None,
) -> TimedSchedule:
    """Início mais cedo possível para cada ordem por máquina"""
    slots: Dict[int, Slot] = {}
    for machine_id, seq in sequences.items():
        speed = instance.speed(machine_id)
        cursor: Number = 0
        for job_id in seq:
            job = instance.job(job_id)
            duration = job.size / speed
            begin = max(cursor, job.release)
            if timely_delta is not None:
                begin = max(begin, timely_delta * duration)
            if not_before is not None and job_id in not_before:
                begin = max(begin, not_before[job_id])
            cursor = begin + duration
            slots[job_id] = Slot(machine_id, cursor)
    return TimedSchedule(slots)


# === FORMATO TEXTO ===

def _parse_number(token: str, line_number: int, exact: bool) -> Number:
    try:
        return Fraction(token) if exact else float(token)
    except (ValueError, ZeroDivisionError):
        raise InstanceFormatError(f"not a number: {token!r}", line_number) from None


def _parse_int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"not an integer: {token!r}", line_number) from None


def _content_lines(text: str) -> Iterable[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            yield number, stripped.split()


def parse_instance(text: str, exact: bool = False, delta: Optional[Number] = None) -> Instance:
    """
    Lê o formato texto de instância

    Cabeçalho `m n has_release`, linhas `machine <id> <speed>` e
    `job <id> <size> <weight> <release>`.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance", 1)
    header_line, header = lines[0]
    if len(header) != 3:
        raise InstanceFormatError("header must be `m n has_release`", header_line)
    m = _parse_int(header[0], header_line)
    n = _parse_int(header[1], header_line)
    flag = header[2].lower()
    if flag not in {"0", "1", "true", "false"}:
        raise InstanceFormatError(f"has_release must be 0/1, got {header[2]!r}", header_line)
    has_release = flag in {"1", "true"}

    machines: List[Machine] = []
    jobs: List[Job] = []
    for number, tokens in lines[1:]:
        kind = tokens[0]
        try:
            if kind == "machine":
                if len(tokens) != 3:
                    raise InstanceFormatError("expected `machine <id> <speed>`", number)
                machines.append(Machine(_parse_int(tokens[1], number), _parse_number(tokens[2], number, exact)))
            elif kind == "job":
                if len(tokens) != 5:
                    raise InstanceFormatError("expected `job <id> <size> <weight> <release>`", number)
                jobs.append(
                    Job(
                        _parse_int(tokens[1], number),
                        _parse_number(tokens[2], number, exact),
                        _parse_number(tokens[3], number, exact),
                        _parse_number(tokens[4], number, exact),
                    )
                )
            else:
                raise InstanceFormatError(f"unknown record {kind!r}", number)
        except DomainError as exc:
            raise InstanceFormatError(str(exc), number) from None
    last_line = lines[-1][0]
    if len(machines) != m:
        raise InstanceFormatError(f"header announces {m} machines, found {len(machines)}", last_line)
    if len(jobs) != n:
        raise InstanceFormatError(f"header announces {n} jobs, found {len(jobs)}", last_line)
    try:
        return Instance(tuple(jobs), tuple(machines), has_release, delta)
    except DomainError as exc:
        raise InstanceFormatError(str(exc), header_line) from None


def _fmt(x: Number) -> str:
    return repr(float(x))


def format_instance(instance: Instance) -> str:
    lines = [f"{instance.m} {instance.n} {int(instance.has_release_dates)}"]
    for machine in sorted(instance.machines, key=lambda mc: mc.id):
        lines.append(f"machine {machine.id} {_fmt(machine.speed)}")
    for job in sorted(instance.jobs, key=lambda j: j.id):
        lines.append(f"job {job.id} {_fmt(job.size)} {_fmt(job.weight)} {_fmt(job.release)}")
    return "\n".join(lines) + "\n"


def instance_hash(instance: Instance) -> str:
    return hashlib.sha256(format_instance(instance).encode()).hexdigest()[:12]


def parse_schedule(text: str) -> TimedSchedule:
    """Linhas `job <id> machine <id> completion <decimal>`"""
    slots: Dict[int, Slot] = {}
    for number, tokens in _content_lines(text):
        if len(tokens) != 6 or tokens[0] != "job" or tokens[2] != "machine" or tokens[4] != "completion":
            raise InstanceFormatError("expected `job <id> machine <id> completion <decimal>`", number)
        job_id = _parse_int(tokens[1], number)
        if job_id in slots:
            raise InstanceFormatError(f"job {job_id} listed twice", number)
        slots[job_id] = Slot(_parse_int(tokens[3], number), _parse_number(tokens[5], number, exact=False))
    return TimedSchedule(slots)


def format_schedule(schedule: TimedSchedule) -> str:
    return "".join(
        f"job {jid} machine {slot.machine} completion {_fmt(slot.completion)}\n"
        for jid, slot in schedule.slots.items()
    )


# === LEDGER ===

@dataclass
class LedgerRow:
    """Linha do ledger por estágio (uma desigualdade auditada ou um valor medido)"""
    stage: str
    instance_hash: str = ""
    k: Optional[int] = None
    zeta: Optional[int] = None
    palette: Optional[str] = None
    band: Optional[int] = None
    guess: Optional[str] = None
    z_star: Optional[float] = None
    cost: Optional[float] = None
    oracle: Optional[float] = None
    ratio: Optional[float] = None
    check: str = ""
    slack: Optional[float] = None
    passed: bool = True


LEDGER_FIELDS = [f.name for f in fields(LedgerRow)]


class StageLedger:
    """Coleção de linhas de ledger com auditoria de desigualdades"""

    def __init__(self, instance_hash: str = ""):
        self.instance_hash = instance_hash
        self.rows: List[LedgerRow] = []

    def record(self, stage: str, **values) -> LedgerRow:
        row = LedgerRow(stage=stage, instance_hash=self.instance_hash, **values)
        self.rows.append(row)
        return row

    def audit(self, stage: str, check: str, lhs: Number, rhs: Number, **values) -> LedgerRow:
        """Registra lhs ≤ rhs com folga rhs − lhs"""
        passed = approx_le(lhs, rhs)
        row = self.record(stage, check=check, slack=float(rhs - lhs), passed=passed, **values)
        if not passed:
            logger.warning(f"auditoria falhou em {stage}: {check} (folga {row.slack:.3g})")
        return row

    def extend(self, other: "StageLedger") -> None:
        self.rows.extend(other.rows)

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failures(self) -> List[LedgerRow]:
        return [row for row in self.rows if not row.passed]

    def write_csv(self, stream: TextIO) -> None:
        writer = csv.DictWriter(stream, fieldnames=LEDGER_FIELDS)
        writer.writeheader()
        for row in self.rows:
            writer.writerow(asdict(row))

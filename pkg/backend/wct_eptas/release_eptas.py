#!/usr/bin/env python3
"""
Release EPTAS - Related Machines with Release Dates

Pipeline completo com datas de liberação:

1. arredondamento A → A′ e job shifting (Ã)
2. para cada k candidato: release shifting (A_k) e partição nas
   sub-instâncias A_{ik} de razão de liberação limitada
3. por A_{ik}: paletas das máquinas rápidas, deslocamento de densidade e
   bandas resolvidas pelo MILP de configurações com tempo indexado
4. eliminação de intervalos esparsos, combinação das bandas e das
   sub-instâncias, realização final em A

Todas as grandezas astronômicas (α, R, L, γ_R, D, B) são guardadas em
log_{1+δ}; o perfil prático usa magnitudes executáveis e registra as
desigualdades não garantidas como medidas no ledger.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Callable, Deque, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .bands_eptas import ConfigurationLimitError
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
    cost,
    geo_value,
    instance_hash,
    is_timely,
    machine_timeline,
    natural_key,
    natural_order,
    pseudo_cost,
    realize,
    tolerance,
    validate,
)
from .milp import LinearModel, MilpBudget, Sense, solve_milp
from .oracle import ObjectiveKind, OracleLimits, opt_release
from .rounding import ParamPack, Profile, density_shift, round_release, split_into_bands, zeta_candidates
from .timeline import JobShiftResult, interval_of, job_shift, time_stretch, truncate_horizon, truncation_horizon

logger = logging.getLogger(__name__)

# job → (máquina, início planejado)
Plan = Dict[int, Tuple[int, Number]]
# (densidade, tamanho, liberação) em expoentes
JobType = Tuple[int, int, int]


class PaletteLimitError(SchedulingError):
    """Número de paletas acima do limite configurado"""

    def __init__(self, count: int, cap: int):
        super().__init__(f"palette count {count} exceeds cap {cap}")
        self.count = count
        self.cap = cap


class FallbackRequired(SchedulingError):
    """Máquinas insuficientes para a etapa da máquina rosa"""

    def __init__(self, machines: int, needed: int):
        super().__init__(f"{machines} machines; the pink-machine step needs at least {needed}")
        self.machines = machines
        self.needed = needed


def _geo(exponent: float, delta: float) -> float:
    """(1+δ)^e em ponto flutuante, saturando em 0 e ∞"""
    try:
        return math.pow(1 + delta, exponent)
    except OverflowError:
        return math.inf


def _measure(ledger: StageLedger, stage: str, check: str, lhs: Number, rhs: Number, enforce: bool, **values) -> None:
    """Audita lhs ≤ rhs quando garantido; caso contrário só registra a folga"""
    if enforce:
        ledger.audit(stage, check, lhs, rhs, **values)
        return
    slack = float(rhs) - float(lhs) if math.isfinite(float(rhs)) else math.inf
    ledger.record(stage, check=f"{check} [measured]", slack=slack, **values)


# === PARÂMETROS ===

class ReleaseParams(BaseModel):
    """
    Constantes do caso com datas de liberação

    k_count = α/δ é o número de valores de k; Q_{i,k} e Ψ_{i,k} =
    (1+δ)^{Q_{i,k}} delimitam os intervalos D_{i,k} = [Ψ_{i,k}, Ψ_{i,k+1}),
    que cobrem a linha do tempo a partir de (1+δ)^θ.
    """
    model_config = ConfigDict(frozen=True)

    delta: float
    profile: Profile = Profile.PRACTICAL
    theta: int = 0
    y: int
    y_hat: int
    log_alpha: float
    k_count: int
    log_R: float
    log_L: float
    log_gamma: float
    log_D: float
    log_B: float
    fast_types: int
    palette_cap: int = 10 ** 5
    palette_budget: Optional[int] = None
    config_cap: int = 20000
    exact_order_limit: int = 7
    max_nodes: int = 20000
    time_limit: float = 60.0

    @model_validator(mode="after")
    def _check(self) -> "ReleaseParams":
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.log_gamma < 0:
            raise ValueError("gamma_R must lie in (0, 1)")
        if not self.log_B < 0:
            raise ValueError("B must lie in (0, 1)")
        if not self.log_alpha > 1:
            raise ValueError("alpha must exceed 1 + delta")
        if self.k_count < 1 or self.fast_types < 1:
            raise ValueError("k_count and fast_types must be positive")
        if self.palette_budget is not None and self.palette_budget < 1:
            raise ValueError("palette_budget must be positive")
        return self

    @classmethod
    def from_pack(cls, pack: ParamPack, instance: Optional[Instance] = None, **overrides) -> "ReleaseParams":
        """
        Deriva as constantes de um ParamPack com release=True

        faithful: ŷ = ξ/δ^{ℓ+1}, α = ŷ/δ^{34}, R = α^{α/δ−1}, L = Rŷ/δ^{25},
        γ_R = δ^{20}/((1+δ)^y (y+1)(log R + 1)), B = δ⁶/(L(1+δ)²D).
        practical: ŷ = 4, α = ŷ/δ⁴, R medido na instância, L cobre também o
        trabalho total na máquina mais lenta, B = δ³/((1+δ)² min(D, 10³)).
        """
        delta = float(pack.delta)
        lb = math.log1p(delta)
        inv = pack.inv_delta
        log_inv = math.log(inv) / lb
        theta, ratio, work = 0, 1.0, 0.0
        if instance is not None and instance.jobs:
            if any(j.release_exp is None for j in instance.jobs):
                raise DomainError("release parameters need a rounded release-date instance")
            theta = min(j.release_exp for j in instance.jobs)
            base = _geo(theta, delta)
            ratio = max(float(instance.max_release) / base, 1.0)
            slowest = min(float(mc.speed) for mc in instance.machines)
            work = sum(float(j.size) for j in instance.jobs) / slowest / base

        if pack.profile is Profile.FAITHFUL:
            y_hat = pack.xi * inv ** (pack.ell + 1)
            log_alpha = math.log(y_hat) / lb + 34 * log_inv
            k_count = y_hat * inv ** 35
            log_R = (k_count - 1) * log_alpha
            log_L = log_R + math.log(y_hat) / lb + 25 * log_inv
            log_gamma = -20 * log_inv - pack.y_constant - math.log((pack.y_constant + 1) * (log_R + 1)) / lb
            span = log_L - log_gamma
            log_D = span * (pack.y_constant + 1) * (span + 3) * (log_L + 2) * (log_R + 1)
            log_B = -6 * log_inv - log_L - 2 - log_D
            budget = None
        else:
            y_hat = 4
            alpha = y_hat * inv ** 4
            log_alpha = math.log(alpha) / lb
            k_count = alpha * inv
            log_R = math.log(ratio) / lb
            log_L = math.log(ratio * y_hat * inv ** 5 + 2 * work) / lb
            log_gamma = -4 * log_inv - pack.y_constant - math.log((pack.y_constant + 1) * (log_R + 1)) / lb
            log_D = math.log(1000) / lb
            log_B = -3 * log_inv - 2 - log_D
            budget = 2

        values = dict(
            delta=delta, profile=pack.profile, theta=theta, y=pack.y, y_hat=y_hat,
            log_alpha=log_alpha, k_count=k_count, log_R=log_R, log_L=log_L,
            log_gamma=log_gamma, log_D=log_D, log_B=log_B,
            fast_types=inv ** 7 + 1, palette_budget=budget,
        )
        values.update(overrides)
        return cls(**values)

    def with_measured_configurations(self, count: int) -> "ReleaseParams":
        """No perfil prático, D é o número medido de configurações e B é recalculado"""
        if self.profile is Profile.FAITHFUL:
            return self
        lb = math.log1p(self.delta)
        log_D = math.log(max(1, min(count, 1000))) / lb
        log_B = -3 * math.log(1 / self.delta) / lb - 2 - log_D
        return self.model_copy(update={"log_D": log_D, "log_B": log_B})

    @property
    def enforce(self) -> bool:
        return self.profile is Profile.FAITHFUL

    @property
    def alpha(self) -> float:
        return _geo(self.log_alpha, self.delta)

    @property
    def gamma_R(self) -> float:
        return _geo(self.log_gamma, self.delta)

    @property
    def L(self) -> float:
        return _geo(self.log_L, self.delta)

    @property
    def pink_machines_needed(self) -> int:
        return 2 * (self.fast_types - 1) + 3

    def Q(self, i: int, k: int) -> int:
        if i < 0:
            return self.theta
        if k >= self.k_count:
            i, k = i + k // self.k_count, k % self.k_count
        return self.theta + math.ceil((k + i * self.k_count) * self.log_alpha - 1e-9)

    def psi(self, i: int, k: int) -> float:
        return _geo(self.Q(i, k), self.delta)

    def locate(self, exponent: int) -> Tuple[int, int]:
        """(i, k) com Q_{i,k} ≤ e < Q_{i,k+1}"""
        if exponent < self.theta:
            raise DomainError(f"release exponent {exponent} lies below theta {self.theta}")
        period = self.k_count * self.log_alpha
        offset = exponent - self.theta
        i = max(0, int(offset // period))
        while i > 0 and self.Q(i, 0) > exponent:
            i -= 1
        while self.Q(i + 1, 0) <= exponent:
            i += 1
        k = int(max(0, min(self.k_count - 1, (offset - i * period) // self.log_alpha)))
        while k > 0 and self.Q(i, k) > exponent:
            k -= 1
        while k < self.k_count - 1 and self.Q(i, k + 1) <= exponent:
            k += 1
        return i, k


# === RELEASE SHIFTING ===

def release_shift(instance: Instance, k: int, rp: ReleaseParams) -> Tuple[Instance, Dict[int, Instance]]:
    """
    A_k e sua partição em sub-instâncias A_{ik}

    Liberações em D_{i,k} sobem para Ψ_{i,k+1}; A_{ik} reúne os jobs com
    liberação em [Ψ_{i−1,k+1}, Ψ_{i,k}).
    """
    if not 0 <= k < rp.k_count:
        raise DomainError(f"k must lie in [0, {rp.k_count}), got {k}")
    delta = instance.delta
    jobs: List[Job] = []
    part_of: Dict[int, int] = {}
    for job in instance.jobs:
        i, kk = rp.locate(job.release_exp)
        exponent = job.release_exp
        if kk == k:
            exponent = rp.Q(i, k + 1)
            job = replace(job, release=geo_value(exponent, delta), release_geo=GeoValue(exponent))
        i, kk = rp.locate(exponent)
        part_of[job.id] = i + 1 if kk > k else i
        jobs.append(job)
    shifted = instance.with_jobs(jobs)
    parts: Dict[int, List[Job]] = defaultdict(list)
    for job in shifted.jobs:
        parts[part_of[job.id]].append(job)
    moved = sum(1 for a, b in zip(instance.jobs, shifted.jobs) if a.release_exp != b.release_exp)
    logger.debug(f"release_shift k={k}: {moved} liberações elevadas, {len(parts)} sub-instâncias")
    return shifted, {i: shifted.with_jobs(group) for i, group in sorted(parts.items())}


def release_idle_insertion(schedule: TimedSchedule, instance: Instance, k: int, rp: ReleaseParams) -> TimedSchedule:
    """Insere |D_{i,k}| de ociosidade antes do primeiro job que começa em Ψ_{i,k} ou depois"""
    slots: Dict[int, Slot] = {}
    for jid, slot in schedule.slots.items():
        start = float(schedule.start(instance, jid))
        added = 0.0
        i = 0
        while True:
            lo = rp.psi(i, k)
            if not math.isfinite(lo) or lo > start + tolerance(start):
                break
            added += rp.psi(i, k + 1) - lo
            i += 1
        slots[jid] = Slot(slot.machine, slot.completion + added)
    return TimedSchedule(slots)


def idle_insertion_total(schedule: TimedSchedule, instance: Instance, rp: ReleaseParams,
                         ledger: Optional[StageLedger] = None) -> float:
    """
    Σ_k custo do schedule após a inserção de ociosidade para cada k

    Valores de k cujo Ψ_{0,k} passa do último início deixam o schedule
    intacto e entram multiplicados.
    """
    base = float(cost(instance, schedule).total)
    if not schedule.slots:
        return 0.0
    last_start = max(float(schedule.start(instance, jid)) for jid in schedule.slots)
    if rp.psi(1, 0) <= last_start:
        active = range(rp.k_count)
    else:
        limit = 0
        while limit < rp.k_count and rp.psi(0, limit) <= last_start + tolerance(last_start):
            limit += 1
        active = range(limit)
    total = sum(float(cost(instance, release_idle_insertion(schedule, instance, k, rp)).total) for k in active)
    total += (rp.k_count - len(active)) * base
    if ledger is not None:
        bound = (rp.k_count + (1 + rp.delta) * rp.k_count * rp.delta) * base
        ledger.audit("release_shift", "sum_k SOL_k <= (alpha/delta + (1+delta) alpha) SOL", total, bound,
                     cost=total)
    return total


def k_candidates(instance: Instance, rp: ReleaseParams) -> List[int]:
    """Valores de k que tocam alguma liberação, mais um k livre (que deixa Ã intacta)"""
    used = sorted({rp.locate(j.release_exp)[1] for j in instance.jobs})
    free = next((k for k in range(min(rp.k_count, len(used) + 1)) if k not in used), None)
    return used + ([free] if free is not None else [])


def choose_k(
    instance: Instance,
    rp: ReleaseParams,
    solve: Callable[[int], Tuple[TimedSchedule, float]],
) -> Tuple[int, TimedSchedule, float]:
    """Resolve cada k candidato e fica com o de menor valor (empate: menor k)"""
    best: Optional[Tuple[float, int, TimedSchedule]] = None
    for k in k_candidates(instance, rp):
        schedule, value = solve(k)
        logger.debug(f"choose_k: k={k}, valor={value:.6g}")
        if best is None or value < best[0] - 1e-12 * max(1.0, abs(best[0])):
            best = (value, k, schedule)
    value, k, schedule = best
    logger.info(f"choose_k: k={k} escolhido entre {len(k_candidates(instance, rp))} candidatos")
    return k, schedule, value


# === PROPRIEDADES ESTRUTURAIS ===

def _runs(instance: Instance, schedule: TimedSchedule) -> Dict[int, List[Tuple[Number, Number, Job]]]:
    out: Dict[int, List[Tuple[Number, Number, Job]]] = {}
    for machine in instance.machines:
        out[machine.id] = [(s, e, instance.job(jid)) for s, e, jid in machine_timeline(instance, schedule, machine.id)]
    return out


def _density_sorted_after(instance: Instance, schedule: TimedSchedule, psi: float) -> bool:
    for runs in _runs(instance, schedule).values():
        tail = [job.density for start, _, job in runs if start > psi]
        if any(b > a + tolerance(a) for a, b in zip(tail, tail[1:])):
            return False
    return True


def _separated(instance: Instance, schedule: TimedSchedule, start_floor: float, gap: float,
               rp: ReleaseParams) -> bool:
    factor = _geo(rp.y_hat, rp.delta)
    for runs in _runs(instance, schedule).values():
        for start, end, job in runs:
            if start < start_floor:
                continue
            for _, other_end, other in runs:
                if other.id == job.id or other_end < end + gap:
                    continue
                if other.density * factor > job.density + tolerance(job.density):
                    return False
    return True


def property_1(instance: Instance, schedule: TimedSchedule, psi: float, psi_prime: float, rp: ReleaseParams) -> bool:
    """Densidade não-crescente depois de Ψ e separação (1+δ)^ŷ a distância Ψŷ/δ^{28} desde Ψ′/2"""
    gap = psi * rp.y_hat / rp.delta ** 28
    return _density_sorted_after(instance, schedule, psi) and _separated(instance, schedule, psi_prime / 2, gap, rp)


def property_no_large(instance: Instance, schedule: TimedSchedule, psi: float, rp: ReleaseParams) -> bool:
    """Nenhum job com tamanho acima de Ψŷ/δ^{25}·s na máquina em que roda"""
    bound = psi * rp.y_hat / rp.delta ** 25
    return all(
        float(instance.job(jid).size) <= bound * float(instance.speed(slot.machine)) * (1 + 1e-9)
        for jid, slot in schedule.slots.items()
    )


def property_3(instance: Instance, schedule: TimedSchedule, psi: float, psi_prime: float, rp: ReleaseParams) -> bool:
    """Como property_1 com Ψ′/4 e Ψŷ/δ^{27}"""
    gap = psi * rp.y_hat / rp.delta ** 27
    return _density_sorted_after(instance, schedule, psi) and _separated(instance, schedule, psi_prime / 4, gap, rp)


def audit_properties(ledger: StageLedger, stage: str, instance: Instance, schedule: TimedSchedule, psi: float,
                     rp: ReleaseParams, psi_prime: Optional[float] = None, **values) -> bool:
    """Uma linha pass/fail por propriedade na fronteira de estágio"""
    psi_prime = psi if psi_prime is None else psi_prime
    checks = {
        "property 1: density order after psi and separation from psi'/2": property_1(
            instance, schedule, psi, psi_prime, rp),
        "property 2: no job larger than psi y_hat / delta^25 s": property_no_large(instance, schedule, psi, rp),
        "property 3: density order after psi and separation from psi'/4": property_3(
            instance, schedule, psi, psi_prime, rp),
    }
    for check, holds in checks.items():
        ledger.audit(stage, check, 0 if holds else 1, 0, **values)
    return all(checks.values())


def sort_tail_by_density(instance: Instance, schedule: TimedSchedule, psi: float, delta: float) -> TimedSchedule:
    """
    Jobs que começam depois de Ψ passam à ordem natural

    Os que começam até Ψ ficam no início original. Ψ deve ser pelo menos
    a maior liberação.
    """
    sequences: Dict[int, List[int]] = {}
    not_before: Dict[int, Number] = {}
    for mid, seq in schedule.sequences().items():
        head = [jid for jid in seq if schedule.start(instance, jid) <= psi]
        tail = natural_order(instance.job(jid) for jid in seq if schedule.start(instance, jid) > psi)
        sequences[mid] = head + [job.id for job in tail]
        not_before.update({jid: schedule.start(instance, jid) for jid in head})
    return realize(instance, sequences, timely_delta=delta, not_before=not_before)


def _is_sparse(load: float, speed: float, t: int, delta: float) -> bool:
    return 0 < load <= speed * delta ** 5 * _geo(t, delta) * (1 + 1e-9)


def _start_loads(instance: Instance, plan: Plan, delta: float) -> Dict[Tuple[int, int], float]:
    loads: Dict[Tuple[int, int], float] = defaultdict(float)
    for jid, (mid, start) in plan.items():
        loads[(mid, interval_of(start, delta))] += float(instance.job(jid).size)
    return loads


def _sparse_from_plan(instance: Instance, plan: Plan, delta: float,
                      horizon: Optional[int] = None) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = defaultdict(list)
    for (mid, t), load in _start_loads(instance, plan, delta).items():
        if horizon is not None and t > horizon:
            continue
        if _is_sparse(load, float(instance.speed(mid)), t, delta):
            out[t].append(mid)
    return {t: sorted(ms, key=instance.machine_index) for t, ms in sorted(out.items())}


def sparse_intervals(instance: Instance, schedule: TimedSchedule, delta: float,
                     horizon: Optional[int] = None) -> Dict[int, List[int]]:
    """
    Máquinas esparsas por intervalo

    J_{t,u} é esparso quando contém um início e o tamanho total dos jobs
    que começam nele é no máximo s_u·δ⁵·(1+δ)^t.
    """
    return _sparse_from_plan(instance, _plan_of(instance, schedule), delta, horizon)


# === PLANOS E MATERIALIZAÇÃO ===

def _plan_of(instance: Instance, schedule: TimedSchedule) -> Plan:
    return {jid: (slot.machine, schedule.start(instance, jid)) for jid, slot in schedule.slots.items()}


def _materialize(instance: Instance, plan: Plan, delta: float, free_after: Optional[Number] = None,
                 reorder: bool = True, pinned: FrozenSet[int] = frozenset()) -> TimedSchedule:
    """
    Realiza um plano: por máquina, ordem por início planejado

    Jobs planejados até free_after (e os de pinned) não começam antes do
    plano; os demais rodam o mais cedo possível, em ordem natural se reorder.
    """
    per_machine: Dict[int, List[Tuple[Number, Tuple, int]]] = defaultdict(list)
    for jid, (mid, start) in plan.items():
        per_machine[mid].append((start, natural_key(instance.job(jid)), jid))
    sequences: Dict[int, List[int]] = {}
    not_before: Dict[int, Number] = {}
    for mid, rows in per_machine.items():
        rows.sort()
        held = [free_after is None or start <= free_after or jid in pinned for start, _, jid in rows]
        head = [(start, jid) for (start, _, jid), keep in zip(rows, held) if keep]
        tail = [instance.job(jid) for (_, _, jid), keep in zip(rows, held) if not keep]
        if reorder:
            tail = natural_order(tail)
        sequences[mid] = [jid for _, jid in head] + [job.id for job in tail]
        not_before.update({jid: start for start, jid in head})
    return realize(instance, sequences, timely_delta=delta, not_before=not_before)


# === PALETAS ===

@dataclass(frozen=True)
class Palette:
    """
    Cores das máquinas mais rápidas

    A cor de uma máquina é o conjunto de intervalos t ∈ [0, horizon] em que
    ela tem um início ou tempo ocioso; pink é o índice da máquina rosa,
    cuja cor é o universo inteiro.
    """
    colors: Tuple[FrozenSet[int], ...]
    horizon: int
    pink: Optional[int] = None

    @property
    def universe(self) -> FrozenSet[int]:
        return frozenset(range(self.horizon + 1))

    def color(self, index: int) -> Optional[FrozenSet[int]]:
        if 1 <= index <= len(self.colors):
            return self.colors[index - 1]
        return None

    def is_pink(self, index: int) -> bool:
        return self.color(index) == self.universe

    def admits(self, index: int, starts: Iterable[int]) -> bool:
        """Todo início dentro do universo cai em um intervalo da cor"""
        color = self.color(index)
        if color is None:
            return True
        return all(t in color for t in starts if 0 <= t <= self.horizon)

    def shifted(self, tau: int = 1) -> "Palette":
        """Paleta do schedule com tempos multiplicados por (1+δ)^τ"""
        head = frozenset(range(min(tau, self.horizon + 1)))
        colors = tuple(head | {t + tau for t in c if t + tau <= self.horizon} for c in self.colors)
        return Palette(colors, self.horizon, self.pink)

    @property
    def label(self) -> str:
        masks = [sum(1 << t for t in c) for c in self.colors]
        return "/".join(f"{mask:x}" for mask in masks) + (f"@{self.pink}" if self.pink else "")


def universal_palette(horizon: int, fast_machines: int, pink: Optional[int] = None) -> Palette:
    full = frozenset(range(horizon + 1))
    return Palette(tuple(full for _ in range(fast_machines)), horizon, pink)


def palette_count(horizon: int, fast_machines: int, pink: Optional[int] = None) -> int:
    free = fast_machines - (1 if pink is not None else 0)
    bits = (horizon + 1) * max(free, 0)
    return 2 ** min(bits, 63)


def enumerate_palettes(horizon: int, fast_machines: int, pink: Optional[int] = None,
                       cap: int = 10 ** 5) -> Iterator[Palette]:
    """Todas as paletas, a universal primeiro; PaletteLimitError acima do limite"""
    count = palette_count(horizon, fast_machines, pink)
    if count > cap:
        raise PaletteLimitError(count, cap)
    return _palette_stream(horizon, fast_machines, pink)


def _palette_stream(horizon: int, fast_machines: int, pink: Optional[int]) -> Iterator[Palette]:
    universe = list(range(horizon + 1))
    subsets = [
        frozenset(combo) for size in range(len(universe), -1, -1) for combo in itertools.combinations(universe, size)
    ]
    free = [idx for idx in range(1, fast_machines + 1) if idx != pink]
    for choice in itertools.product(subsets, repeat=len(free)):
        colors = dict(zip(free, choice))
        if pink is not None:
            colors[pink] = frozenset(universe)
        yield Palette(tuple(colors[idx] for idx in range(1, fast_machines + 1)), horizon, pink)


def compute_palette(instance: Instance, schedule: TimedSchedule, delta: float, horizon: int,
                    fast_types: int) -> Palette:
    """Paleta efetiva de um schedule; a máquina rosa é a de menor índice ≥ 2 com cor completa"""
    colors = []
    for index in range(1, min(fast_types, instance.m) + 1):
        machine = instance.machine_at(index)
        runs = machine_timeline(instance, schedule, machine.id)
        color = set()
        for t in range(horizon + 1):
            lo, hi = _geo(t, delta), _geo(t + 1, delta)
            busy = sum(max(0.0, min(float(e), hi) - max(float(s), lo)) for s, e, _ in runs)
            started = any(lo <= float(s) < hi for s, _, _ in runs)
            if started or busy < (hi - lo) * (1 - 1e-9):
                color.add(t)
        colors.append(frozenset(color))
    palette = Palette(tuple(colors), horizon)
    pink = next((idx for idx in range(2, len(colors) + 1) if palette.is_pink(idx)), None)
    return Palette(palette.colors, horizon, pink)


# === MÁQUINA ROSA ===

@dataclass
class PinkResult:
    schedule: TimedSchedule
    pink: int
    ledger: StageLedger


def ensure_pink(instance: Instance, schedule: TimedSchedule, rp: ReleaseParams, psi: float) -> PinkResult:
    """
    Torna rosa uma máquina v ∈ [2, 1/δ⁷+1]

    Após o time stretching, v é a máquina de menor peso atribuído; seus
    jobs que começam até Ψ vão para o último gap da máquina 1 que termina
    antes de (1+δ)^{t+1}/δ⁶, onde t é o intervalo de conclusão original.
    Depois da maior liberação os jobs seguem em densidade não-crescente.
    """
    if rp.fast_types < 2:
        raise DomainError("the pink machine needs at least two fast machines")
    needed = rp.pink_machines_needed
    if instance.m < needed:
        raise FallbackRequired(instance.m, needed)
    delta = rp.delta
    ledger = StageLedger(instance_hash(instance))
    stretched = time_stretch(instance, schedule, delta)
    ledger.extend(stretched.ledger)
    current = stretched.timed()

    def assigned_weight(index: int) -> float:
        mid = instance.machine_at(index).id
        return sum(float(instance.job(jid).weight) for jid in current.machine_jobs(mid))

    pink_index = min(range(2, rp.fast_types + 1), key=lambda idx: (assigned_weight(idx), idx))
    pink = instance.machine_at(pink_index)
    first = instance.machine_at(1)
    plan = _plan_of(instance, current)
    gaps = sorted(i for (mid, i) in stretched.gaps if mid == first.id)
    used: Dict[int, float] = defaultdict(float)
    tail_end = max((float(slot.completion) for slot in current.slots.values() if slot.machine == first.id), default=0.0)
    moved = sorted(
        (jid for jid in current.machine_jobs(pink.id) if current.start(instance, jid) <= psi),
        key=lambda jid: current.start(instance, jid),
    )
    limits: Dict[int, float] = {}
    for jid in moved:
        job = instance.job(jid)
        limit = _geo(interval_of(current.slots[jid].completion, delta) + 1, delta) / delta ** 6
        limits[jid] = limit
        duration = float(job.size / first.speed)
        host = max((i for i in gaps if _geo(i + 1, delta) <= limit), default=None)
        if host is None:
            planned = tail_end
            tail_end += duration
            logger.warning(f"ensure_pink: job {jid} sem gap na máquina 1, anexado ao fim")
        else:
            planned = _geo(host, delta) + used[host]
            used[host] += duration
        plan[jid] = (first.id, max(planned, float(job.release)))

    kept = frozenset(jid for jid, (mid, _) in plan.items() if mid == pink.id)
    result = _materialize(instance, plan, delta, free_after=max(float(instance.max_release), psi), pinned=kept)
    late = sum(1 for jid in moved if float(result.slots[jid].completion) > limits[jid] * (1 + 1e-9))
    _measure(ledger, "ensure_pink", "moved jobs complete by (1+delta)^{t+1}/delta^6", late, 0, rp.enforce)
    early = sum(1 for jid in result.machine_jobs(pink.id) if result.start(instance, jid) <= psi)
    ledger.audit("ensure_pink", "pink machine has no start up to psi", early, 0)
    before = float(pseudo_cost(schedule, instance, delta).total)
    after = float(pseudo_cost(result, instance, delta).total)
    _measure(ledger, "ensure_pink", "pseudo-cost <= (1+delta)^2 input", after, (1 + delta) ** 2 * before,
             rp.enforce, cost=after)
    logger.debug(f"ensure_pink: máquina {pink.id} (índice {pink_index}), {len(moved)} jobs movidos")
    return PinkResult(result, pink.id, ledger)


# === ELIMINAÇÃO DE INTERVALOS ESPARSOS ===

@dataclass
class SparseResult:
    schedule: TimedSchedule
    merges: int
    ledger: StageLedger


def _machine_jobs_in(instance: Instance, plan: Plan, mid: int, t: int, delta: float) -> List[int]:
    return sorted(
        (jid for jid, (m, start) in plan.items() if m == mid and interval_of(start, delta) == t),
        key=lambda jid: plan[jid][1],
    )


def _anchor(instance: Instance, plan: Plan, mid: int, t: int, delta: float) -> float:
    """Fim do último job que começa e termina dentro de J_{t,u}"""
    speed = float(instance.speed(mid))
    lo, hi = _geo(t, delta), _geo(t + 1, delta)
    ends = [
        float(start) + float(instance.job(jid).size) / speed
        for jid, (m, start) in plan.items()
        if m == mid and lo <= float(start) and float(start) + float(instance.job(jid).size) / speed <= hi
    ]
    return max([lo] + ends)


def eliminate_sparse(instance: Instance, schedule: TimedSchedule, rp: ReleaseParams,
                     pink: Optional[int] = None, horizon: Optional[int] = None) -> SparseResult:
    """
    Deixa no máximo uma máquina esparsa por intervalo

    Fase 1 (após time stretching): enquanto duas máquinas forem esparsas no
    mesmo intervalo, o conteúdo esparso da de maior índice vai para a de
    menor índice, logo depois do último job interno ao intervalo. Fase 2
    (após novo stretching): o conteúdo esparso das máquinas de índice
    ≥ 1/δ⁷+2 vai para o gap da máquina rosa no mesmo intervalo.
    """
    delta = rp.delta
    ledger = StageLedger(instance_hash(instance))
    if not schedule.slots:
        return SparseResult(schedule, 0, ledger)
    stretched = time_stretch(instance, schedule, delta)
    ledger.extend(stretched.ledger)
    plan = _plan_of(instance, stretched.timed())

    merges = 0
    while True:
        sparse = _sparse_from_plan(instance, plan, delta, horizon)
        pair = next(((t, ms) for t, ms in sparse.items() if len(ms) >= 2), None)
        if pair is None:
            break
        t, machines = pair
        low, high = machines[0], machines[-1]
        cursor = _anchor(instance, plan, low, t, delta)
        speed = float(instance.speed(low))
        for jid in _machine_jobs_in(instance, plan, high, t, delta):
            plan[jid] = (low, cursor)
            cursor += float(instance.job(jid).size) / speed
        merges += 1
    merged = _materialize(instance, plan, delta)

    if pink is not None:
        stretched = time_stretch(instance, merged, delta)
        ledger.extend(stretched.ledger)
        plan = _plan_of(instance, stretched.timed())
        speed = float(instance.speed(pink))
        for t, machines in _sparse_from_plan(instance, plan, delta, horizon).items():
            for mid in machines:
                if instance.machine_index(mid) < rp.fast_types + 1 or mid == pink:
                    continue
                cursor = _anchor(instance, plan, pink, t, delta)
                for jid in _machine_jobs_in(instance, plan, mid, t, delta):
                    plan[jid] = (pink, cursor)
                    cursor += float(instance.job(jid).size) / speed
        merged = _materialize(instance, plan, delta)
    else:
        ledger.record("eliminate_sparse", check="pink-machine phase skipped")

    remaining = sparse_intervals(instance, merged, delta, horizon)
    crowded = max((len(ms) for ms in remaining.values()), default=0)
    _measure(ledger, "eliminate_sparse", "at most one sparse machine per interval", crowded, 1, rp.enforce)
    high_sparse = sum(
        1 for ms in remaining.values() for mid in ms if instance.machine_index(mid) >= rp.fast_types + 1
    )
    _measure(ledger, "eliminate_sparse", "no sparse machine beyond the fast machines", high_sparse, 0,
             rp.enforce and pink is not None)
    logger.debug(f"eliminate_sparse: {merges} fusões de intervalos esparsos")
    return SparseResult(merged, merges, ledger)


# === CONFIGURAÇÕES COM TEMPO INDEXADO ===

@dataclass(frozen=True)
class MachineType:
    """As primeiras fast_types máquinas são tipos unitários; as demais se agrupam por velocidade"""
    position: int
    speed_exp: int
    machine_ids: Tuple[int, ...]
    singleton: bool
    fast: bool

    @property
    def count(self) -> int:
        return len(self.machine_ids)


def machine_types(instance: Instance, rp: ReleaseParams) -> List[MachineType]:
    types: List[MachineType] = []
    for pos, machine in enumerate(instance.machines[: rp.fast_types], start=1):
        types.append(MachineType(pos, machine.speed_exp, (machine.id,), True, True))
    rest = instance.machines[rp.fast_types:]
    if rest:
        s_hat = rest[0].speed_exp
        grouped: Dict[int, List[int]] = defaultdict(list)
        for machine in rest:
            grouped[machine.speed_exp].append(machine.id)
        for speed_exp in sorted(grouped, reverse=True):
            # lento: s < B·ŝ
            fast = speed_exp - s_hat >= rp.log_B
            types.append(MachineType(len(types) + 1, speed_exp, tuple(grouped[speed_exp]), False, fast))
    return types


@dataclass(frozen=True)
class ConfigurationR:
    """
    Configuração de uma máquina com datas de liberação

    placements: (r, i, i′, t, N) jobs grandes do tipo (r, i, t) iniciando
    em J_{i′}; blocks: (r, i′, t, n) blocos de jobs pequenos; order é a
    sequência do schedule virtual, com blocos escritos como (r, None, t).
    """
    type_position: int
    speed_exp: int
    placements: Tuple[Tuple[int, int, int, int, int], ...]
    blocks: Tuple[Tuple[int, int, int, int], ...]
    order: Tuple[Tuple[int, Optional[int], int], ...]
    cost: float
    starts: FrozenSet[int]
    makespan: float

    def large_count(self, r: int, i: int, t: int) -> int:
        return sum(n for rr, ii, _, tt, n in self.placements if (rr, ii, tt) == (r, i, t))

    def block_level(self, r: int, t: int) -> int:
        return sum(n for rr, _, tt, n in self.blocks if (rr, tt) == (r, t))

    @property
    def is_empty(self) -> bool:
        return not self.placements and not self.blocks


def _type_of(job: Job) -> JobType:
    return job.density_exp, job.size_exp, job.release_exp


def _orders(items: List[tuple], limit: int) -> Iterator[Tuple[tuple, ...]]:
    """Permutações distintas até limit itens; acima disso, ordem por liberação e ordem por densidade"""
    if len(items) <= limit:
        seen: Set[Tuple] = set()
        for perm in itertools.permutations(items):
            signature = tuple(item[0] for item in perm)
            if signature not in seen:
                seen.add(signature)
                yield perm
        return
    yield tuple(sorted(items, key=lambda it: (it[3], -(it[2] / it[1]) if it[1] else 0)))
    yield tuple(sorted(items, key=lambda it: (-(it[2] / it[1]) if it[1] else 0, it[3])))


def _virtual_schedule(order: Sequence[tuple], speed: float, delta: float) -> List[Tuple[tuple, float, float]]:
    cursor = 0.0
    out = []
    for item in order:
        _, size, _, release = item
        duration = size / speed
        start = max(cursor, release, delta * duration)
        cursor = start + duration
        out.append((item, start, cursor))
    return out


def _configurations_for(mtype: MachineType, chosen: Sequence[Tuple[str, tuple, int]], rp: ReleaseParams,
                        horizon: int) -> List[ConfigurationR]:
    delta = rp.delta
    speed = _geo(mtype.speed_exp, delta)
    items: List[tuple] = []
    for kind, key, count in chosen:
        if kind == "large":
            r, i, t = key
            size = _geo(i, delta)
            items.extend([((r, i, t), size, size * _geo(r, delta), _geo(t, delta))] * count)
        else:
            r, t = key
            size = max(count - 1, 0) * rp.gamma_R * speed
            items.append(((r, None, t), size, size * _geo(r, delta), _geo(t, delta)))
    levels = {key: count for kind, key, count in chosen if kind == "small"}
    if not items:
        return [ConfigurationR(mtype.position, mtype.speed_exp, (), (), (), 0.0, frozenset(), 0.0)]

    best: Dict[Optional[FrozenSet[int]], ConfigurationR] = {}
    for order in _orders(items, rp.exact_order_limit):
        virtual = _virtual_schedule(order, speed, delta)
        makespan = virtual[-1][2]
        if makespan > rp.L * (1 + 1e-9):
            continue
        value = sum(item[2] * _geo(interval_of(end, delta) + 1, delta) for item, _, end in virtual if item[1] > 0)
        started: Dict[int, float] = defaultdict(float)
        placements: Counter = Counter()
        blocks: Dict[Tuple[int, int, int], int] = {}
        for item, start, _ in virtual:
            (r, i, t), size = item[0], item[1]
            at = interval_of(start, delta)
            started[at] += size
            if i is None:
                blocks[(r, at, t)] = levels[(r, t)]
            else:
                placements[(r, i, at, t)] += 1
        if not mtype.singleton and any(_is_sparse(load, speed, at, delta) for at, load in started.items()):
            continue
        starts = frozenset(at for at, load in started.items() if 0 <= at <= horizon)
        bucket = starts if mtype.singleton else None
        if bucket in best and best[bucket].cost <= value:
            continue
        best[bucket] = ConfigurationR(
            mtype.position,
            mtype.speed_exp,
            tuple(sorted((r, i, at, t, n) for (r, i, at, t), n in placements.items())),
            tuple(sorted((r, at, t, n) for (r, at, t), n in blocks.items())),
            tuple(item[0] for item in order),
            value,
            starts,
            makespan,
        )
    kept = list(best.values())
    # dominância: menos inícios e custo não maior
    return [
        c for c in kept
        if not any(o is not c and o.starts <= c.starts and o.cost <= c.cost and (o.starts, o.cost) != (c.starts, c.cost)
                   for o in kept)
    ]


def enumerate_release_configurations(instance: Instance, types: Sequence[MachineType], rp: ReleaseParams,
                                     horizon: int) -> List[ConfigurationR]:
    """
    Configurações por tipo de máquina

    Jobs com tamanho relativo em [γ_R, L) são grandes; abaixo de γ_R entram
    em blocos por (densidade, liberação); a partir de L não cabem no tipo.
    Cada multiconjunto gera a(s) ordem(ns) de menor pseudo-custo do schedule
    virtual: uma por conjunto de inícios nos tipos unitários, uma só nos
    demais (após a regra de remoção de intervalos esparsos).
    """
    delta = rp.delta
    counts: Counter = Counter(_type_of(j) for j in instance.jobs)
    configs: List[ConfigurationR] = []
    for mtype in types:
        large = sorted(ty for ty in counts if rp.log_gamma <= ty[1] - mtype.speed_exp < rp.log_L)
        small: Dict[Tuple[int, int], float] = defaultdict(float)
        for (r, i, t), count in counts.items():
            if i - mtype.speed_exp < rp.log_gamma:
                small[(r, t)] += count * _geo(i, delta)
        unit = rp.gamma_R * _geo(mtype.speed_exp, delta)
        slots: List[Tuple[str, tuple, int]] = [("large", ty, counts[ty]) for ty in large]
        for key, total in sorted(small.items()):
            top = math.ceil(total / unit - 1e-9)
            if top > rp.config_cap:
                raise ConfigurationLimitError(top, rp.config_cap)
            slots.append(("small", key, top))
        choice = [0] * len(slots)

        def walk(pos: int) -> None:
            if pos == len(slots):
                chosen = [(kind, key, c) for (kind, key, _), c in zip(slots, choice) if c]
                configs.extend(_configurations_for(mtype, chosen, rp, horizon))
                if len(configs) > rp.config_cap:
                    raise ConfigurationLimitError(len(configs), rp.config_cap)
                return
            for c in range(slots[pos][2] + 1):
                choice[pos] = c
                walk(pos + 1)
            choice[pos] = 0

        walk(0)
    logger.debug(f"enumerate_release_configurations: {len(configs)} configurações em {len(types)} tipos")
    return configs


@dataclass
class PiRelease:
    model: LinearModel
    configs: List[ConfigurationR]
    types: List[MachineType]
    x_index: List[int]
    y_index: Dict[Tuple[int, int, int, int], int]


def build_pi_release(instance: Instance, configs: Sequence[ConfigurationR], types: Sequence[MachineType],
                     rp: ReleaseParams) -> PiRelease:
    """
    MILP de configurações

    Σ_C X_C = m_σ por tipo; conservação por tipo de job (r, i, t); e por
    bloco, Σ_i (1+δ)^i Y ≤ n·γ_R·s·X_C. X_C é inteira só nos tipos rápidos.
    """
    delta = rp.delta
    counts: Counter = Counter(_type_of(j) for j in instance.jobs)
    by_position = {mt.position: mt for mt in types}
    model = LinearModel("pi_release")
    x_index = [
        model.add_variable(f"X[{n}]", 0.0, float(by_position[c.type_position].count),
                           integral=by_position[c.type_position].fast)
        for n, c in enumerate(configs)
    ]
    y_index: Dict[Tuple[int, int, int, int], int] = {}
    for n, c in enumerate(configs):
        for (r, i, t) in sorted(counts):
            if c.block_level(r, t) and i - c.speed_exp < rp.log_gamma:
                y_index[(n, r, i, t)] = model.add_variable(f"Y[{n},{r},{i},{t}]")
    model.set_objective({x_index[n]: c.cost for n, c in enumerate(configs)})

    for mtype in types:
        row = {x_index[n]: 1.0 for n, c in enumerate(configs) if c.type_position == mtype.position}
        model.add_constraint(row, Sense.EQ, float(mtype.count), name=f"type[{mtype.position}]")
    for (r, i, t), count in sorted(counts.items()):
        row: Dict[int, float] = {}
        for n, c in enumerate(configs):
            large = c.large_count(r, i, t)
            if large:
                row[x_index[n]] = float(large)
            if (n, r, i, t) in y_index:
                row[y_index[(n, r, i, t)]] = 1.0
        model.add_constraint(row, Sense.EQ, float(count), name=f"jobs[{r},{i},{t}]")
    for n, c in enumerate(configs):
        speed = _geo(c.speed_exp, delta)
        for (r, t) in sorted({(rr, tt) for rr, _, tt, _ in c.blocks}):
            row = {idx: _geo(i, delta) for (nn, rr, i, tt), idx in y_index.items() if (nn, rr, tt) == (n, r, t)}
            row[x_index[n]] = -c.block_level(r, t) * rp.gamma_R * speed
            model.add_constraint(row, Sense.LE, 0.0, name=f"block[{n},{r},{t}]")
    return PiRelease(model, list(configs), list(types), x_index, y_index)


@dataclass
class ReleaseRounding:
    leftovers: List[int] = field(default_factory=list)
    leftover_size: float = 0.0
    leftover_bound: float = 0.0


def round_pi_release(values: Sequence[float], pi: PiRelease, instance: Instance, rp: ReleaseParams,
                     pink: Optional[int] = None) -> Tuple[TimedSchedule, ReleaseRounding]:
    """
    Arredonda uma solução do MILP

    X′ = ⌊X*⌋ cópias por configuração; cada cópia recebe N_C jobs grandes e
    ⌈Y/X*⌉ jobs pequenos por bloco, em ordem de tamanho não-decrescente. As
    sobras vão para o gap da máquina rosa (ou da máquina 1) no intervalo de
    sua liberação, depois de dois time stretchings: o primeiro absorve o
    excesso de ⌈Y/X*⌉ sobre Y/X*, o segundo abre os gaps das sobras.
    """
    delta = rp.delta
    pool: Dict[JobType, Deque[Job]] = defaultdict(deque)
    for job in sorted(instance.jobs, key=lambda j: j.id):
        pool[_type_of(job)].append(job)
    free_hosts = {mt.position: list(mt.machine_ids) for mt in pi.types}
    sequences: Dict[int, List[int]] = {}

    for n, config in enumerate(pi.configs):
        x = float(values[pi.x_index[n]])
        copies = int(math.floor(x + 1e-6))
        hosts = free_hosts[config.type_position]
        for _ in range(min(copies, len(hosts))):
            host = hosts.pop(0)
            seq: List[int] = []
            for r, i, t in config.order:
                if i is not None:
                    if pool[(r, i, t)]:
                        seq.append(pool[(r, i, t)].popleft().id)
                    continue
                block: List[Job] = []
                for (nn, rr, ii, tt), idx in sorted(pi.y_index.items()):
                    if (nn, rr, tt) != (n, r, t):
                        continue
                    take = math.ceil(float(values[idx]) / x - 1e-6)
                    while take > 0 and pool[(r, ii, t)]:
                        block.append(pool[(r, ii, t)].popleft())
                        take -= 1
                seq.extend(j.id for j in sorted(block, key=lambda j: (j.size, j.id)))
            if seq:
                sequences[host] = seq

    partial = realize(instance, sequences, timely_delta=delta)
    leftovers = sorted((job for queue in pool.values() for job in queue), key=lambda j: (j.release, j.id))
    target = pink if pink is not None else instance.machine_at(1).id
    report = ReleaseRounding(
        [j.id for j in leftovers],
        float(sum(j.size for j in leftovers)),
        rp.delta ** 5 * float(instance.speed(target)),
    )
    if not leftovers:
        return partial, report
    logger.debug(f"round_pi_release: {len(leftovers)} sobras para a máquina {target}")
    base = partial
    for _ in range(2):
        if base.slots:
            stretched = time_stretch(instance, base, delta).timed()
            base = _materialize(instance, _plan_of(instance, stretched), delta)
    plan = _plan_of(instance, base)
    for job in leftovers:
        plan[job.id] = (target, job.release)
    return _materialize(instance, plan, delta), report


def _lowest_active_machine(instance: Instance, palette: Palette, t: int) -> Optional[int]:
    if t > palette.horizon:
        return instance.machine_at(1).id
    for index in range(1, min(len(palette.colors), instance.m) + 1):
        if t in palette.color(index):
            return instance.machine_at(index).id
    return None


def preprocess_bounded(instance: Instance, palette: Palette, rp: ReleaseParams) -> Tuple[Instance, TimedSchedule]:
    """
    Remove os lotes J_t que cabem em m̂_t durante I_t

    m̂_t é a máquina de menor índice com início ou ociosidade em I_t; se o
    tempo de processamento de J_t nela for até δ⁴(1+δ)^t, J_t roda ali e
    sai da instância.
    """
    delta = rp.delta
    by_release: Dict[int, List[Job]] = defaultdict(list)
    for job in instance.jobs:
        by_release[job.release_exp].append(job)
    slots: Dict[int, Slot] = {}
    for t, jobs in sorted(by_release.items()):
        host = _lowest_active_machine(instance, palette, t)
        if host is None:
            continue
        speed = instance.speed(host)
        if float(sum(j.size for j in jobs) / speed) > delta ** 4 * _geo(t, delta):
            continue
        cursor: Number = jobs[0].release
        for job in natural_order(jobs):
            duration = job.size / speed
            cursor = max(cursor, delta * duration) + duration
            slots[job.id] = Slot(host, cursor)
    rest = [j for j in instance.jobs if j.id not in slots]
    return instance.with_jobs(rest), TimedSchedule(slots)


def merge_fragment(instance: Instance, schedule: TimedSchedule, fragment: TimedSchedule,
                   delta: float) -> TimedSchedule:
    """Junta os jobs pré-posicionados ao schedule do MILP e aplica time stretching"""
    if not fragment.slots:
        return schedule
    plan = {**_plan_of(instance, schedule), **_plan_of(instance, fragment)}
    merged = _materialize(instance, plan, delta)
    return time_stretch(instance, merged, delta).timed()


@dataclass
class ReleaseBandResult:
    schedule: TimedSchedule
    cost: float
    z_star: float
    palette: Palette
    ledger: StageLedger = field(default_factory=StageLedger)


def solve_bounded_release(
    band: Instance,
    palette: Palette,
    rp: ReleaseParams,
    pink: Optional[int] = None,
    config_cache: Optional[Dict[Instance, List[ConfigurationR]]] = None,
) -> Optional[ReleaseBandResult]:
    """
    Banda de densidades com razão de liberação limitada

    Pré-processamento, MILP de configurações filtrado pela paleta e
    arredondamento. Devolve None quando a paleta torna o MILP inviável.
    """
    delta = rp.delta
    ledger = StageLedger(instance_hash(band))
    if not band.jobs:
        return ReleaseBandResult(TimedSchedule({}), 0.0, 0.0, palette, ledger)
    reduced, fragment = preprocess_bounded(band, palette, rp)
    ledger.record("preprocess", palette=palette.label, check=f"{len(fragment.slots)} jobs pre-placed")

    partial, z_star = TimedSchedule({}), 0.0
    if reduced.jobs:
        types = machine_types(reduced, rp)
        cache = config_cache if config_cache is not None else {}
        if reduced not in cache:
            cache[reduced] = enumerate_release_configurations(reduced, types, rp, palette.horizon)
        by_position = {mt.position: mt for mt in types}
        admitted = [
            c for c in cache[reduced]
            if not by_position[c.type_position].singleton or palette.admits(c.type_position, c.starts)
        ]
        pi = build_pi_release(reduced, admitted, types, rp)
        solution = solve_milp(pi.model, MilpBudget(max_nodes=rp.max_nodes, time_limit=rp.time_limit))
        if solution.vector is None:
            logger.debug(f"paleta {palette.label}: {solution.status.value}")
            return None
        z_star = float(solution.objective)
        partial, rounding = round_pi_release(solution.vector, pi, reduced, rp, pink)
        partial_cost = float(pseudo_cost(partial, reduced, delta).total)
        _measure(ledger, "round_pi_release", "leftover size <= delta^5 s_v",
                 rounding.leftover_size, rounding.leftover_bound, rp.enforce, palette=palette.label)
        _measure(ledger, "round_pi_release", "pseudo-cost <= (1+delta)^3 Z*", partial_cost,
                 (1 + delta) ** 3 * z_star, rp.enforce, palette=palette.label, z_star=z_star, cost=partial_cost)

    schedule = merge_fragment(band, partial, fragment, delta)
    value = float(pseudo_cost(schedule, band, delta).total)
    ledger.record("band_release", palette=palette.label, z_star=z_star, cost=value)
    return ReleaseBandResult(schedule, value, z_star, palette, ledger)


# === COMBINAÇÃO DAS BANDAS ===

@dataclass
class _MachineState:
    """Intervalos ≤ taken_until estão tomados; pair_of guarda o par (k′, t′) de cada um"""
    lowest: int
    taken_until: Optional[int] = None
    pair_of: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    sparse_load: Dict[int, float] = field(default_factory=lambda: defaultdict(float))
    postpone_load: Dict[int, float] = field(default_factory=lambda: defaultdict(float))
    covered: Set[int] = field(default_factory=set)

    def pair(self, t: int) -> Optional[Tuple[int, int]]:
        if self.taken_until is None or t > self.taken_until:
            return None
        return self.pair_of.get(t)

    def take(self, upto: int, pair: Tuple[int, int]) -> None:
        lo = self.lowest if self.taken_until is None else self.taken_until + 1
        for q in range(min(lo, upto + 1), upto + 1):
            self.pair_of[q] = pair
        if self.taken_until is None or upto > self.taken_until:
            self.taken_until = upto


def _postpone_target(state: _MachineState, t2: int, mu: int, total: float, floor_t: int,
                     capacity: Callable[[int], float], delta: float) -> Tuple[int, bool]:
    """Último gap antes de (1+δ)^{t′}/δ^{10μ} com capacidade; senão o primeiro depois"""
    lb = math.log1p(delta)
    last = t2 + math.floor(10 * mu * math.log(1 / delta) / lb) - 1
    for q in range(last, floor_t, -1):
        if q not in state.covered and state.postpone_load[q] + total <= capacity(q):
            return q, True
    q = max(last + 1, floor_t + 1)
    while q in state.covered or state.postpone_load[q] + total > capacity(q):
        q += 1
    return q, False


def combine_density_bands(instance: Instance, band_schedules: Sequence[TimedSchedule], rp: ReleaseParams,
                          palette: Optional[Palette] = None) -> Tuple[TimedSchedule, StageLedger]:
    """
    Combina as soluções das bandas (em densidade crescente) por máquina

    Bandas em k decrescente, intervalos em t decrescente. J_{k,t} com
    tamanho até δ⁵(1+δ)^t·s vai para o sparse-gap do intervalo; maior, fica
    no início original e toma o intervalo. Ao encontrar um intervalo tomado
    por uma banda mais densa k′, os jobs restantes de k são adiados para
    um postpone-gap antes de (1+δ)^{t′}/δ^{10(k′−k)}. Depois da maior
    liberação, densidade não-crescente.
    """
    delta = rp.delta
    ledger = StageLedger(instance_hash(instance))
    active = [s for s in band_schedules if s.slots]
    if len(active) <= 1:
        merged = active[0] if active else TimedSchedule({})
        return merged, ledger

    plan: Plan = {}
    for machine in instance.machines:
        _combine_machine(instance, machine.id, band_schedules, rp, palette, plan, ledger)
    combined = _materialize(instance, plan, delta, free_after=instance.max_release)

    band_costs: Dict[int, float] = defaultdict(float)
    for schedule in active:
        for jid, value in pseudo_cost(schedule, instance.subset(schedule.slots), delta).contributions.items():
            band_costs[schedule.slots[jid].machine] += float(value)
    final_costs: Dict[int, float] = defaultdict(float)
    for jid, value in pseudo_cost(combined, instance, delta).contributions.items():
        final_costs[combined.slots[jid].machine] += float(value)
    for mid in sorted(final_costs):
        _measure(ledger, "combine_bands", f"machine {mid} pseudo-cost <= (1+delta) sum of bands",
                 final_costs[mid], (1 + delta) * band_costs[mid], rp.enforce, cost=final_costs[mid])
    return combined, ledger


def _combine_machine(instance: Instance, mid: int, band_schedules: Sequence[TimedSchedule], rp: ReleaseParams,
                     palette: Optional[Palette], plan: Plan, ledger: StageLedger) -> None:
    delta = rp.delta
    speed = float(instance.speed(mid))
    index = instance.machine_index(mid)
    rows: Dict[int, List[Tuple[Number, Number, int]]] = {}
    for k, schedule in enumerate(band_schedules):
        runs = [
            (start, end, jid)
            for start, end, jid in machine_timeline(instance.subset(schedule.slots), schedule, mid)
        ]
        if runs:
            rows[k] = runs
    if not rows:
        return

    def capacity(t: int) -> float:
        return speed * delta ** 5 * _geo(t, delta)

    def sparse_allowed(t: int) -> bool:
        if palette is None or palette.color(index) is None or t > palette.horizon:
            return True
        return t in palette.color(index)

    lowest = min(interval_of(start, delta) for runs in rows.values() for start, _, _ in runs)
    state = _MachineState(lowest)
    charges: List[Tuple[int, int, int, float]] = []
    moved_late = 0

    for k in sorted(rows, reverse=True):
        by_t: Dict[int, List[Tuple[Number, Number, int]]] = defaultdict(list)
        for start, end, jid in rows[k]:
            by_t[interval_of(start, delta)].append((start, end, jid))
        order = sorted(by_t, reverse=True)
        for pos, t in enumerate(order):
            group = by_t[t]
            size = sum(float(instance.job(jid).size) for _, _, jid in group)
            pair = state.pair(t)
            if pair is None or pair[0] == k:
                if size <= capacity(t) and sparse_allowed(t):
                    for start, _, jid in group:
                        plan[jid] = (mid, start)
                    state.sparse_load[t] += size
                    if state.sparse_load[t] > capacity(t) and pair is None:
                        state.take(t, (k, t))
                    continue
                upto = t
                for start, end, jid in group:
                    plan[jid] = (mid, start)
                    first, last = interval_of(start, delta), interval_of(end, delta)
                    state.covered.update(range(first + 1, last))
                    upto = max(upto, last - 1 if last > first else t)
                if pair is None:
                    state.take(upto, (k, t))
                continue

            k2, t2 = pair
            mu = k2 - k
            rest = sorted((row for q in order[pos:] for row in by_t[q]), key=lambda row: row[0])
            total = sum(float(instance.job(jid).size) for _, _, jid in rest)
            target, on_time = _postpone_target(state, t2, mu, total, t, capacity, delta)
            if not on_time:
                moved_late += 1
            cursor = _geo(target, delta) + state.postpone_load[target] / speed
            for start, _, jid in rest:
                plan[jid] = (mid, max(cursor, float(start)))
                cursor += float(instance.job(jid).size) / speed
            state.postpone_load[target] += total
            charges.append((k2, t2, mu, total))
            state.take(target, (k2, t2))
            break

    for t, load in sorted(state.sparse_load.items()):
        ledger.audit("combine_bands", f"sparse-gap load <= 2 delta^5 (1+delta)^t s (machine {mid}, t={t})",
                     load, 2 * capacity(t), band=None)
    for t, load in sorted(state.postpone_load.items()):
        if load:
            ledger.audit("combine_bands", f"postpone-gap load <= delta^5 (1+delta)^t s (machine {mid}, t={t})",
                         load, capacity(t))
    for k2, t2, mu, total in charges:
        _measure(ledger, "combine_bands", f"charged size <= (1+delta)^t'/delta^(10(mu-1)+3) (machine {mid})",
                 total, speed * _geo(t2, delta) / delta ** (10 * (mu - 1) + 3), rp.enforce, band=k2)
    if moved_late:
        ledger.record("combine_bands", check=f"machine {mid}: {moved_late} postponements past the deadline")


# === COMBINAÇÃO DAS SUB-INSTÂNCIAS ===

def combine_subinstances(
    instance: Instance,
    parts: Dict[int, Instance],
    schedules: Dict[int, TimedSchedule],
    rp: ReleaseParams,
    k: int,
) -> Tuple[TimedSchedule, StageLedger]:
    """
    Junta as soluções das A_{ik} em um schedule de A_k

    Cada solução perde a ociosidade após Ψ_{i,k}/(1+δ) e sofre time
    stretching. Jobs que terminam até Ψ_{i,k+1} ficam onde estão; os demais
    formam lotes por janela de largura Ψ_{i,k+1} a partir do primeiro
    início excedente, e cada lote ocupa o próximo intervalo com gap em que
    (1+δ)^t ≥ Ψ_{i,k+1}/δ⁵, com carga até δ⁴(1+δ)^t·s.
    """
    delta = rp.delta
    ledger = StageLedger(instance_hash(instance))
    plan: Plan = {}
    compact: Dict[int, TimedSchedule] = {}
    overflow: Dict[int, List[int]] = {}

    for i, sub in sorted(parts.items()):
        schedule = schedules.get(i)
        if schedule is None or not schedule.slots:
            continue
        threshold = rp.psi(i, k) / (1 + delta)
        squeezed = _materialize(sub, _plan_of(sub, schedule), delta, free_after=threshold, reorder=False)
        stretched = time_stretch(sub, squeezed, delta)
        ledger.extend(stretched.ledger)
        stretched_timed = stretched.timed()
        compact[i] = squeezed
        frame_end = rp.psi(i, k + 1)
        overflow[i] = []
        for jid, slot in stretched_timed.slots.items():
            if float(slot.completion) <= frame_end * (1 + 1e-12):
                plan[jid] = (slot.machine, stretched_timed.start(sub, jid))
            else:
                overflow[i].append(jid)

    covered: Dict[int, Set[int]] = defaultdict(set)
    for jid, (mid, start) in plan.items():
        end = float(start) + float(instance.job(jid).size / instance.speed(mid))
        first, last = interval_of(start, delta), interval_of(end, delta)
        covered[mid].update(range(first + 1, last))
    load: Dict[Tuple[int, int], float] = defaultdict(float)

    for i, jobs in sorted(overflow.items()):
        if not jobs:
            continue
        frame_end = rp.psi(i, k + 1)
        squeezed = compact[i]
        min_host = math.ceil(math.log(frame_end / delta ** 5) / math.log1p(delta) - 1e-9)
        by_machine: Dict[int, List[int]] = defaultdict(list)
        for jid in jobs:
            by_machine[squeezed.slots[jid].machine].append(jid)
        for mid, members in sorted(by_machine.items()):
            speed = float(instance.speed(mid))
            members.sort(key=lambda jid: squeezed.start(parts[i], jid))
            mu = float(squeezed.start(parts[i], members[0]))
            chunks: Dict[int, List[int]] = defaultdict(list)
            for jid in members:
                chunks[int((float(squeezed.start(parts[i], jid)) - mu) // frame_end) + 1].append(jid)
            host = min_host - 1
            for ell in sorted(chunks):
                size = sum(float(instance.job(jid).size) for jid in chunks[ell])
                host += 1
                while host in covered[mid] or load[(mid, host)] + size > delta ** 4 * _geo(host, delta) * speed:
                    host += 1
                cursor = _geo(host, delta) + load[(mid, host)] / speed
                for jid in chunks[ell]:
                    plan[jid] = (mid, cursor)
                    cursor += float(instance.job(jid).size) / speed
                load[(mid, host)] += size
        ledger.record("combine_subinstances", k=k, check=f"i={i}: {len(jobs)} overflow jobs")

    for (mid, host), value in sorted(load.items()):
        ledger.audit("combine_subinstances", f"host load <= delta^4 (1+delta)^t s (machine {mid}, t={host})",
                     value, delta ** 4 * _geo(host, delta) * float(instance.speed(mid)), k=k)

    combined = _materialize(instance, plan, delta)
    for i, jobs in sorted(overflow.items()):
        if not jobs:
            continue
        psi = rp.psi(i, k + 1)
        base = pseudo_cost(compact[i], parts[i], delta).contributions
        window = [jid for jid in compact[i].slots if psi / 2 <= float(compact[i].start(parts[i], jid)) < 3 * psi / 4]
        moved_cost = sum(float(instance.job(jid).weight) * _geo(interval_of(combined.slots[jid].completion, delta) + 1, delta)
                         for jid in jobs)
        _measure(ledger, "combine_subinstances", f"i={i}: overflow cost <= delta c_(i,0)", moved_cost,
                 delta * sum(float(base[jid]) for jid in window), rp.enforce, k=k)
    total_parts = sum(float(pseudo_cost(s, parts[i], delta).total) for i, s in schedules.items() if s.slots)
    combined_cost = float(pseudo_cost(combined, instance, delta).total)
    _measure(ledger, "combine_subinstances", "pseudo-cost <= (1+delta)^2 sum of parts", combined_cost,
             (1 + delta) ** 2 * total_parts, rp.enforce, k=k, cost=combined_cost)
    return combined, ledger


# === SUB-INSTÂNCIAS ===

def _normalized(sub: Instance) -> Tuple[Instance, int]:
    """Menor liberação levada a 1; tamanhos, pesos e liberações divididos por (1+δ)^s"""
    shift = min(j.release_exp for j in sub.jobs)
    delta = sub.delta
    jobs = []
    for j in sub.jobs:
        size_exp, weight_exp, release_exp = j.size_exp - shift, j.weight_exp - shift, j.release_exp - shift
        jobs.append(replace(
            j,
            size=geo_value(size_exp, delta), weight=geo_value(weight_exp, delta),
            release=geo_value(release_exp, delta),
            size_geo=GeoValue(size_exp), weight_geo=GeoValue(weight_exp), release_geo=GeoValue(release_exp),
        ))
    return sub.with_jobs(jobs), shift


def _unscaled(schedule: TimedSchedule, shift: int, delta: Number) -> TimedSchedule:
    factor = geo_value(shift, delta)
    return TimedSchedule({jid: Slot(slot.machine, slot.completion * factor) for jid, slot in schedule.slots.items()})


def _palette_plan(scaled: Instance, rp: ReleaseParams, pink_step: bool, ledger: StageLedger) -> List[Palette]:
    horizon = max(j.release_exp for j in scaled.jobs) + 2
    fast = min(rp.fast_types, scaled.m)
    pinks: List[Optional[int]] = list(range(2, fast + 1)) if pink_step else [None]
    palettes: List[Palette] = []
    for pink in pinks:
        try:
            stream = enumerate_palettes(horizon, fast, pink, rp.palette_cap)
        except PaletteLimitError as exc:
            logger.warning(f"limite de paletas atingido ({exc.count} > {exc.cap}); usando a paleta universal")
            ledger.record("palette", check=f"palette cap engaged ({exc.count} > {exc.cap})")
            stream = iter([universal_palette(horizon, fast, pink)])
        if rp.palette_budget is not None:
            stream = itertools.islice(stream, rp.palette_budget)
        palettes.extend(stream)
    return palettes


def solve_release_subinstance(
    sub: Instance,
    params: ParamPack,
    rp: ReleaseParams,
    shift: JobShiftResult,
    ledger: StageLedger,
    pink_step: bool = False,
    k: Optional[int] = None,
) -> TimedSchedule:
    """
    Melhor schedule de A_{ik} sobre paletas e ζ

    Por paleta e ζ: bandas resolvidas por solve_bounded_release,
    eliminação de esparsos, truncamento do horizonte e combinação.
    O valor é o pseudo-custo com os pesos da sub-instância.
    """
    delta = rp.delta
    scaled, offset = _normalized(sub)
    horizon_exp = truncation_horizon(scaled.max_release, rp.y_hat, delta)
    config_cache: Dict[Instance, List[ConfigurationR]] = {}
    band_cache: Dict[Tuple[Instance, Palette], Optional[TimedSchedule]] = {}
    best: Optional[Tuple[float, TimedSchedule]] = None

    for palette in _palette_plan(scaled, rp, pink_step, ledger):
        pink = scaled.machine_at(palette.pink).id if palette.pink is not None else None
        for zeta in zeta_candidates(scaled, params):
            shifted = density_shift(scaled, zeta, params)
            schedules: List[TimedSchedule] = []
            feasible = True
            for band in split_into_bands(shifted, params, zeta):
                key = (band, palette)
                if key not in band_cache:
                    result = solve_bounded_release(band, palette, rp, pink, config_cache)
                    if result is None:
                        band_cache[key] = None
                    else:
                        ledger.extend(result.ledger)
                        cleaned = eliminate_sparse(band, result.schedule, rp, pink, palette.horizon)
                        ledger.extend(cleaned.ledger)
                        band_psi = float(band.max_release)
                        ordered = sort_tail_by_density(band, cleaned.schedule, band_psi, delta)
                        audit_properties(ledger, "eliminate_sparse", band, ordered, band_psi, rp,
                                         k=k, zeta=zeta, palette=palette.label)
                        stretched = time_stretch(band, ordered, delta)
                        band_cache[key] = truncate_horizon(band, stretched.timed(), shift, horizon_exp, ledger)
                if band_cache[key] is None:
                    feasible = False
                    break
                schedules.append(band_cache[key])
            if not feasible:
                continue
            combined, combine_ledger = combine_density_bands(shifted, schedules, rp, palette)
            ledger.extend(combine_ledger)
            combined = sort_tail_by_density(shifted, combined, float(shifted.max_release), delta)
            audit_properties(ledger, "combine_bands", shifted, combined, float(shifted.max_release), rp,
                             k=k, zeta=zeta, palette=palette.label)
            value = float(pseudo_cost(combined, scaled, delta).total)
            ledger.record("subinstance", k=k, zeta=zeta, palette=palette.label, cost=value)
            if best is None or value < best[0] - 1e-12 * max(1.0, abs(best[0])):
                best = (value, combined)

    if best is None:
        raise SchedulingError("no palette admits a feasible configuration program")
    psi = float(sub.max_release)
    schedule = sort_tail_by_density(sub, _unscaled(best[1], offset, sub.delta), psi, delta)
    audit_properties(ledger, "subinstance", sub, schedule, psi, rp, k=k)
    return schedule


# === DRIVER ===

@dataclass
class ReleaseReport:
    profile: Profile
    delta: float
    k: Optional[int]
    cost: float
    oracle: Optional[float] = None
    fallback: Optional[str] = None
    constants: Dict[str, float] = field(default_factory=dict)
    ledger: StageLedger = field(default_factory=StageLedger)

    @property
    def ratio(self) -> Optional[float]:
        if self.oracle is None or self.oracle == 0:
            return None
        return self.cost / float(self.oracle)


def _solve_for_k(tilde: Instance, k: int, params: ParamPack, rp: ReleaseParams, shift: JobShiftResult,
                 ledger: StageLedger, pink_step: bool) -> Tuple[TimedSchedule, float]:
    shifted, parts = release_shift(tilde, k, rp)
    distinct = max((len({j.release_exp for j in part.jobs}) for part in parts.values()), default=0)
    ledger.audit("release_shift", "distinct releases per sub-instance < (alpha/delta)^2", distinct,
                 float(rp.k_count) ** 2, k=k)
    schedules = {
        i: solve_release_subinstance(part, params, rp, shift, ledger, pink_step, k) for i, part in parts.items()
    }
    combined, combine_ledger = combine_subinstances(shifted, parts, schedules, rp, k)
    ledger.extend(combine_ledger)
    value = float(pseudo_cost(combined, tilde, rp.delta).total)
    ledger.record("choose_k", k=k, cost=value)
    return combined, value


def _final_sequences(instance: Instance, reference: Instance, schedule: TimedSchedule) -> Dict[int, List[int]]:
    """Ordem por conclusão; depois da maior liberação de reference, ordem natural em A"""
    horizon = reference.max_release
    sequences: Dict[int, List[int]] = {}
    for mid, seq in schedule.sequences().items():
        head = [jid for jid in seq if schedule.start(reference, jid) <= horizon]
        tail = natural_order(instance.job(jid) for jid in seq if schedule.start(reference, jid) > horizon)
        sequences[mid] = head + [job.id for job in tail]
    return sequences


def eptas_release(
    instance: Instance,
    eps: float,
    params: Optional[ParamPack] = None,
    rp: Optional[ReleaseParams] = None,
    oracle_limits: Optional[OracleLimits] = None,
    fallback: bool = True,
) -> Tuple[TimedSchedule, ReleaseReport]:
    """
    EPTAS com datas de liberação, avaliado em pseudo-custo

    Com menos de 2/δ⁷+3 máquinas e fallback ativo, instâncias aceitas pelo
    oracle vão direto para opt_release; as demais seguem o pipeline sem a
    etapa da máquina rosa. O schedule final é a realização timely em A das
    ordens por máquina do melhor k.
    """
    params = params or ParamPack.build(eps, Profile.PRACTICAL, release=True)
    delta = float(params.delta)
    ledger = StageLedger(instance_hash(instance))
    limits = oracle_limits or OracleLimits.for_release()
    limits = limits.model_copy(update={"objective": ObjectiveKind.PSEUDO_COST, "timely_only": True, "delta": delta})
    if not instance.jobs:
        return TimedSchedule({}), ReleaseReport(params.profile, delta, None, 0.0, ledger=ledger)

    rounded = round_release(instance, params)
    shift = job_shift(rounded)
    ledger.extend(shift.ledger)
    tilde = shift.instance
    rp = rp or ReleaseParams.from_pack(params, tilde)
    constants = {
        "delta": delta, "y": float(rp.y), "y_hat": float(rp.y_hat), "log_alpha": rp.log_alpha,
        "k_count": float(rp.k_count), "log_R": rp.log_R, "log_L": rp.log_L,
        "log_gamma_R": rp.log_gamma, "log_B": rp.log_B,
    }
    needed = rp.pink_machines_needed
    pink_step = instance.m >= needed

    if not pink_step and fallback and limits.admits(instance):
        schedule, optimum = opt_release(instance, limits)
        value = float(optimum)
        ledger.record("fallback", check=f"{instance.m} machines < {needed}: exact oracle", cost=value, oracle=value)
        logger.info(f"eptas_release: {instance.m} máquinas, fallback para o oracle")
        return schedule, ReleaseReport(params.profile, delta, None, value, value, "oracle", constants, ledger)
    if not pink_step:
        logger.warning(f"eptas_release: {instance.m} máquinas < {needed}; pipeline sem a etapa da máquina rosa")
        ledger.record("fallback", check=f"{instance.m} machines < {needed}: no pink-machine step")

    k, chosen, _ = choose_k(
        tilde, rp, lambda kk: _solve_for_k(tilde, kk, params, rp, shift, ledger, pink_step)
    )
    idle_insertion_total(chosen, tilde, rp, ledger)
    final = realize(instance, _final_sequences(instance, tilde, chosen), timely_delta=delta)
    psi = float(tilde.max_release)
    final = sort_tail_by_density(instance, final, psi, delta)
    validate(instance, final)
    timely, witness = is_timely(final, instance, delta)
    ledger.audit("final", "schedule is timely", 0 if timely else 1, 0, k=k)
    audit_properties(ledger, "final", instance, final, psi, rp, k=k)
    final_cost = float(pseudo_cost(final, instance, delta).total)

    report = ReleaseReport(params.profile, delta, k, final_cost, None,
                           None if pink_step else "no-pink", constants, ledger)
    if oracle_limits is not None and oracle_limits.admits(instance):
        _, optimum = opt_release(instance, limits)
        report.oracle = float(optimum)
        ledger.audit("oracle", "pseudo-cost <= (1+eps) OPT", final_cost, (1 + eps) * float(optimum),
                     k=k, cost=final_cost, oracle=float(optimum), ratio=report.ratio)
    logger.info(f"eptas_release: k={k}, pseudo-custo={final_cost:.6g}")
    return final, report

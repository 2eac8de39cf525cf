#!/usr/bin/env python3
"""
Bands EPTAS - Related Machines without Release Dates

Pipeline completo sem datas de liberação:

1. arredondamento A → A′
2. para cada ζ: deslocamento de densidade e decomposição em bandas
3. por banda: palpites de escala, configurações, MILP Π, arredondamento
4. combinação das bandas em ordem natural por máquina

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Deque, Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .core import (
    GeoValue,
    Instance,
    Job,
    Number,
    OrderedSchedule,
    SchedulingError,
    StageLedger,
    block_gamma,
    cost,
    geo_ceil,
    geo_value,
    instance_hash,
    natural_order,
)
from .milp import LinearModel, MilpBudget, Sense, Status, solve_milp
from .oracle import OracleLimits, opt_no_release
from .rounding import ParamPack, Profile, density_shift, round_no_release, split_into_bands, zeta_candidates

logger = logging.getLogger(__name__)


class ConfigurationLimitError(SchedulingError):
    """Número de configurações acima do limite configurado"""

    def __init__(self, count: int, cap: int):
        super().__init__(f"configuration count {count} exceeds cap {cap}")
        self.count = count
        self.cap = cap


class InfeasibleGuess(SchedulingError):
    """Nenhuma configuração de velocidade 1 com j1 ∈ {−1, 0}"""


class NRParams(BaseModel):
    """
    Constantes da seção sem datas de liberação

    log_gamma é log_{1+δ} γ. g_delta/f_delta = None representam o valor
    torre da análise (toda configuração é pesada, nenhuma máquina é lenta).
    """
    model_config = ConfigDict(frozen=True)

    delta: float
    log_gamma: float
    g_delta: Optional[int] = None
    f_delta: Optional[int] = None
    config_cap: int = 10 ** 6
    max_nodes: int = 20000
    time_limit: float = 60.0

    @model_validator(mode="after")
    def _check(self) -> "NRParams":
        if not self.log_gamma < 0:
            raise ValueError("gamma must lie in (0, 1)")
        if (self.g_delta is None) != (self.f_delta is None):
            raise ValueError("g_delta and f_delta are both finite or both tower-valued")
        if self.g_delta is not None and not self.f_delta < self.g_delta < 0:
            raise ValueError("constants must satisfy f < g < 0")
        return self

    @classmethod
    def from_pack(
        cls,
        pack: ParamPack,
        gamma: Optional[float] = None,
        g_delta: Optional[int] = None,
        f_delta: Optional[int] = None,
        **overrides,
    ) -> "NRParams":
        delta = float(pack.delta)
        log_base = math.log1p(delta)
        inv = pack.inv_delta
        if pack.profile is Profile.FAITHFUL:
            log_gamma = 12 * math.log(delta) / log_base - pack.y_constant
            default_g = None
            default_f = None
        else:
            log_gamma = 3 * math.log(delta) / log_base - pack.y_constant
            default_g = -(inv ** 3)
            default_f = default_g - 2 * inv ** 2
        if gamma is not None:
            log_gamma = math.log(gamma) / log_base
        g = g_delta if g_delta is not None else default_g
        if f_delta is not None:
            f = f_delta
        elif g is not None:
            f = default_f if g_delta is None else g - 2 * inv ** 2
        else:
            f = None
        return cls(delta=delta, log_gamma=log_gamma, g_delta=g, f_delta=f, **overrides)

    @property
    def gamma(self) -> float:
        return math.exp(self.log_gamma * math.log1p(self.delta))

    def is_slow(self, j2: int) -> bool:
        return self.f_delta is not None and j2 <= self.f_delta

    def is_heavy(self, j1: int) -> bool:
        return self.g_delta is None or j1 > self.g_delta

    def threshold(self, j1: int) -> float:
        """U(C) = γ(1+δ)^{j1−1}"""
        return math.exp((j1 - 1 + self.log_gamma) * math.log1p(self.delta))

    def large_floor(self, j1: int) -> int:
        """Menor expoente de tamanho grande: j1 − 1 + ⌈log γ⌉"""
        return j1 - 1 + math.ceil(self.log_gamma - 1e-12)

    @property
    def count_cap(self) -> int:
        """⌊(1+δ)/γ⌋, limite de n_{r,i}(C) e t_r(C)"""
        bound = (1 + self.delta) / self.gamma if self.gamma > 0 else math.inf
        return int(bound) if math.isfinite(bound) and bound < 2 ** 62 else 2 ** 62

    @property
    def j3_max(self) -> int:
        """Maior j3 com (1+δ)^{j3−2} < 2/δ"""
        return geo_ceil(2 / self.delta, self.delta) + 1


# === PALPITES DE ESCALA ===

@dataclass(frozen=True)
class ScaleGuess:
    """Palpite D_{j,b} = [(1+δ)^{b−1}p_j, (1+δ)^b p_j); os tamanhos são divididos por (1+δ)^b p_j"""
    job_id: int
    b: int
    scale_exp: int

    def interval(self, delta: Number) -> Tuple[Number, Number]:
        return geo_value(self.scale_exp - 1, delta), geo_value(self.scale_exp, delta)


def scale_guesses(instance: Instance, params: ParamPack) -> Iterator[ScaleGuess]:
    """Todos os pares (j, b) com b ∈ [1, n/δ]"""
    bound = instance.n * params.inv_delta
    for job in sorted(instance.jobs, key=lambda j: j.id):
        for b in range(1, bound + 1):
            yield ScaleGuess(job.id, b, job.size_exp + b)


def distinct_guesses(instance: Instance, params: ParamPack, nr: NRParams) -> List[ScaleGuess]:
    """
    Um palpite por expoente de escala, descartando escalas inviáveis

    Palpites com o mesmo expoente geram o mesmo modelo; fica o menor (j, b).
    Uma escala é inviável quando o maior job não cabe em nenhuma carga
    permitida, quando o trabalho total não alcança a janela de carga da
    máquina âncora ou quando excede m cargas máximas.
    """
    if not instance.jobs:
        return []
    max_exp = max(j.size_exp for j in instance.jobs)
    total = sum(j.size for j in instance.jobs)
    seen: Dict[int, ScaleGuess] = {}
    for guess in scale_guesses(instance, params):
        if guess.scale_exp in seen:
            continue
        if max_exp - guess.scale_exp > nr.j3_max:
            continue
        scaled_total = total / geo_value(guess.scale_exp, params.delta)
        if scaled_total <= geo_value(-3, params.delta):
            continue
        if scaled_total > instance.m * geo_value(nr.j3_max, params.delta):
            continue
        seen[guess.scale_exp] = guess
    return sorted(seen.values(), key=lambda g: (g.job_id, g.b))


# === CONFIGURAÇÕES ===

@dataclass(frozen=True)
class ConfigurationNR:
    """
    Configuração de uma máquina

    large: (r, i, n_{r,i}) para classes grandes; small: (r, t_r) blocos de
    tamanho U(C) cada; heavy iff j1 > g(δ).
    """
    j1: int
    j2: int
    large: Tuple[Tuple[int, int, int], ...]
    small: Tuple[Tuple[int, int], ...]
    heavy: bool

    @property
    def j3(self) -> int:
        return self.j1 - self.j2

    def large_count(self, r: int, i: int) -> int:
        for rr, ii, count in self.large:
            if rr == r and ii == i:
                return count
        return 0

    def blocks(self, r: int) -> int:
        for rr, t in self.small:
            if rr == r:
                return t
        return 0

    def work(self, nr: NRParams) -> float:
        delta = nr.delta
        large = sum(count * geo_value(i, delta) for _, i, count in self.large)
        return large + sum(t for _, t in self.small) * nr.threshold(self.j1)


def _classes(instance: Instance) -> Counter:
    return Counter((j.density_exp, j.size_exp) for j in instance.jobs)


def enumerate_configurations(instance: Instance, nr: NRParams) -> List[ConfigurationNR]:
    """
    Todas as configurações válidas

    j2 percorre os expoentes de velocidade presentes; j1 percorre as classes
    de trabalho alcançáveis (do menor job ao trabalho total) com a restrição
    de carga j1 − j2 ≤ j3_max.
    """
    if not instance.jobs:
        return []
    delta = nr.delta
    classes = _classes(instance)
    smallest = min(i for _, i in classes)
    total = sum(count * geo_value(i, delta) for (_, i), count in classes.items())
    top_j1 = geo_ceil(total, delta)
    densities = sorted({r for r, _ in classes})
    cap_count = nr.count_cap

    configs: List[ConfigurationNR] = []
    for j2 in sorted({mc.speed_exp for mc in instance.machines}, reverse=True):
        for j1 in range(smallest, min(top_j1, j2 + nr.j3_max) + 1):
            upper = geo_value(j1, delta) * (1 + 1e-12)
            lower = geo_value(j1 - 2, delta) * (1 + 1e-12)
            floor_i = nr.large_floor(j1)
            unit = nr.threshold(j1)
            large = sorted((r, i) for (r, i) in classes if floor_i <= i <= j1)
            small_total = defaultdict(float)
            for (r, i), count in classes.items():
                if i < floor_i:
                    small_total[r] += count * geo_value(i, delta)
            slots: List[Tuple[str, int, int, int, float]] = []
            for r, i in large:
                limit = min(classes[(r, i)], cap_count)
                slots.append(("large", r, i, limit, geo_value(i, delta)))
            for r in densities:
                if small_total[r] > 0:
                    limit = min(cap_count, math.ceil(small_total[r] / unit))
                    slots.append(("small", r, 0, limit, unit))

            counts = [0] * len(slots)

            def emit(work: float) -> None:
                if not lower < work <= upper:
                    return
                configs.append(
                    ConfigurationNR(
                        j1,
                        j2,
                        tuple((s[1], s[2], c) for s, c in zip(slots, counts) if s[0] == "large" and c),
                        tuple((s[1], c) for s, c in zip(slots, counts) if s[0] == "small" and c),
                        nr.is_heavy(j1),
                    )
                )
                if len(configs) > nr.config_cap:
                    raise ConfigurationLimitError(len(configs), nr.config_cap)

            def walk(pos: int, work: float) -> None:
                if pos == len(slots):
                    emit(work)
                    return
                _, _, _, limit, unit_size = slots[pos]
                for c in range(limit + 1):
                    w = work + c * unit_size
                    if w > upper:
                        break
                    counts[pos] = c
                    walk(pos + 1, w)
                counts[pos] = 0

            walk(0, 0.0)
    logger.debug(f"{len(configs)} configurações enumeradas")
    return configs


def config_cost(config: ConfigurationNR, nr: NRParams) -> float:
    """
    U-cost do conteúdo canônico

    Jobs grandes em ordem natural; em cada densidade o bloco pequeno
    (t_r·U) vem depois dos jobs grandes daquela densidade.
    """
    delta = nr.delta
    speed = geo_value(config.j2, delta)
    unit = nr.threshold(config.j1)
    items = []
    for r, i, count in config.large:
        items.extend([(-r, 0, -i, geo_value(i, delta), geo_value(r, delta))] * count)
    for r, t in config.small:
        items.append((-r, 1, 0, t * unit, geo_value(r, delta)))
    items.sort()
    t_now = 0.0
    total = 0.0
    for _, kind, _, size, density in items:
        if kind == 0:
            t_now += size / speed
            total += density * size * t_now
        else:
            total += block_gamma(size, density, t_now, speed)
            t_now += size / speed
    return total


# === MILP Π ===

@dataclass
class PiModel:
    model: LinearModel
    configs: List[ConfigurationNR]
    costs: List[float]
    x_index: List[int]
    y_index: Dict[Tuple[int, int, int], int]


def build_pi(instance: Instance, configs: Sequence[ConfigurationNR], nr: NRParams) -> PiModel:
    """Restrições (2)–(5); X_C inteiro sse C pesada ou máquina rápida"""
    delta = nr.delta
    if not any(c.j2 == 0 and c.j1 in (-1, 0) for c in configs):
        raise InfeasibleGuess("no speed-1 configuration with j1 in {-1, 0}")
    classes = _classes(instance)
    machines_per_speed = Counter(mc.speed_exp for mc in instance.machines)

    model = LinearModel("pi")
    costs = [config_cost(c, nr) for c in configs]
    x_index = [
        model.add_variable(f"X[{k}]", integral=c.heavy or not nr.is_slow(c.j2)) for k, c in enumerate(configs)
    ]
    y_index: Dict[Tuple[int, int, int], int] = {}
    for k, c in enumerate(configs):
        floor_i = nr.large_floor(c.j1)
        for (r, i) in sorted(classes):
            if i < floor_i:
                y_index[(r, i, k)] = model.add_variable(f"Y[{r},{i},{k}]")

    objective = {x_index[k]: costs[k] for k in range(len(configs))}
    for (r, i, k), idx in y_index.items():
        objective[idx] = geo_value(r + 2 * i, delta) / (2 * geo_value(configs[k].j2, delta))
    model.set_objective(objective)

    for j2, count in sorted(machines_per_speed.items()):
        row = {x_index[k]: 1.0 for k, c in enumerate(configs) if c.j2 == j2}
        if row:
            model.add_constraint(row, Sense.LE, count, name=f"speed[{j2}]")

    for (r, i), count in sorted(classes.items()):
        row = {x_index[k]: c.large_count(r, i) for k, c in enumerate(configs) if c.large_count(r, i)}
        for (rr, ii, k), idx in y_index.items():
            if rr == r and ii == i:
                row[idx] = 1.0
        model.add_constraint(row, Sense.EQ, count, name=f"assign[{r},{i}]")

    for k, c in enumerate(configs):
        unit = nr.threshold(c.j1)
        for r in sorted({rr for (rr, _, kk) in y_index if kk == k}):
            row = {idx: geo_value(i, delta) for (rr, i, kk), idx in y_index.items() if kk == k and rr == r}
            row[x_index[k]] = -(c.blocks(r) + 1) * unit
            model.add_constraint(row, Sense.LE, 0.0, name=f"space[{r},{k}]")

    anchor = {x_index[k]: 1.0 for k, c in enumerate(configs) if c.j2 == 0 and c.j1 in (-1, 0)}
    model.add_constraint(anchor, Sense.GE, 1.0, name="anchor")
    return PiModel(model, list(configs), costs, x_index, y_index)


# === ARREDONDAMENTO ===

@dataclass
class RoundingLedger:
    unassigned_size: float = 0.0
    unassigned_bound: float = 0.0
    overflow_jobs: List[int] = field(default_factory=list)


def round_pi_solution(
    values: Sequence[float], pi: PiModel, instance: Instance, nr: NRParams
) -> Tuple[OrderedSchedule, RoundingLedger]:
    """
    Solução (X*, Y*) → schedule completo

    X′ = ⌊X*⌋; Y′ = ⌈Y*⌉ em configurações pesadas e ⌊Y*·X′/X*⌋ nas leves.
    Jobs pequenos entram por First Fit (ordem não-crescente de tamanho) em
    caixas de primeiro tipo (t_r·U) e depois de segundo tipo ((3/δ)·U).
    O que sobra vira um bloco final numa máquina de velocidade 1 com j1 ∈ {0, −1}.
    """
    delta = nr.delta
    configs = pi.configs
    ledger = RoundingLedger()

    pool: Dict[Tuple[int, int], Deque[Job]] = defaultdict(deque)
    for job in sorted(instance.jobs, key=lambda j: j.id):
        pool[(job.density_exp, job.size_exp)].append(job)

    copies: List[int] = []
    for k, c in enumerate(configs):
        x = values[pi.x_index[k]]
        copies.append(int(round(x)) if c.heavy else int(math.floor(x + 1e-6)))
        if not c.heavy:
            ledger.unassigned_bound += 2 * geo_value(c.j1, delta)

    machines_by_speed: Dict[int, List[int]] = defaultdict(list)
    for mc in instance.machines:
        machines_by_speed[mc.speed_exp].append(mc.id)

    content: Dict[int, List[Job]] = {mc.id: [] for mc in instance.machines}
    anchor_machine: Optional[int] = None
    leftovers: List[Job] = []

    for k, c in enumerate(configs):
        if copies[k] == 0:
            continue
        hosts = [machines_by_speed[c.j2].pop(0) for _ in range(min(copies[k], len(machines_by_speed[c.j2])))]
        if anchor_machine is None and c.j2 == 0 and c.j1 in (-1, 0) and hosts:
            anchor_machine = hosts[0]
        for host in hosts:
            for r, i, count in c.large:
                for _ in range(count):
                    if pool[(r, i)]:
                        content[host].append(pool[(r, i)].popleft())

        unit = nr.threshold(c.j1)
        x_star = values[pi.x_index[k]]
        for r in sorted({rr for (rr, _, kk) in pi.y_index if kk == k}):
            items: List[Job] = []
            for (rr, i, kk), idx in sorted(pi.y_index.items()):
                if kk != k or rr != r:
                    continue
                y = values[idx]
                if c.heavy:
                    take = int(math.ceil(y - 1e-6))
                else:
                    take = int(math.floor(y * copies[k] / x_star + 1e-6)) if x_star > 1e-9 else 0
                for _ in range(take):
                    if pool[(r, i)]:
                        items.append(pool[(r, i)].popleft())
            items.sort(key=lambda j: (-j.size, j.id))
            bins = [[host, c.blocks(r) * unit] for host in hosts] + [[host, 3 * unit / delta] for host in hosts]
            for job in items:
                placed = False
                for slot in bins:
                    if job.size <= slot[1] * (1 + 1e-12):
                        slot[1] -= job.size
                        content[slot[0]].append(job)
                        placed = True
                        break
                if not placed:
                    ledger.overflow_jobs.append(job.id)
                    leftovers.append(job)

    for queue in pool.values():
        leftovers.extend(queue)
    if ledger.overflow_jobs:
        logger.warning(f"First Fit transbordou {len(ledger.overflow_jobs)} jobs; anexados à máquina âncora")
    ledger.unassigned_size = sum(j.size for j in leftovers)
    if leftovers:
        target = anchor_machine if anchor_machine is not None else instance.machines[0].id
        content[target].extend(leftovers)

    schedule = OrderedSchedule({mid: tuple(j.id for j in natural_order(jobs)) for mid, jobs in content.items()})
    return schedule, ledger


# === SOLVER POR BANDA ===

@dataclass
class BandResult:
    schedule: OrderedSchedule
    cost: float
    z_star: Optional[float] = None
    guess: Optional[ScaleGuess] = None
    ledger: StageLedger = field(default_factory=StageLedger)


def _normalize_band(instance: Instance) -> Tuple[Instance, int]:
    """Menor expoente de densidade levado a 0; devolve o deslocamento r0"""
    r0 = min(j.density_exp for j in instance.jobs)
    jobs = [
        replace(j, weight=geo_value(j.weight_exp - r0, instance.delta), weight_geo=GeoValue(j.weight_exp - r0))
        for j in instance.jobs
    ]
    return instance.with_jobs(jobs), r0


def _scaled(instance: Instance, scale_exp: int) -> Instance:
    delta = instance.delta
    jobs = []
    for j in instance.jobs:
        size_exp = j.size_exp - scale_exp
        weight_exp = j.weight_exp - scale_exp
        jobs.append(
            replace(
                j,
                size=geo_value(size_exp, delta),
                weight=geo_value(weight_exp, delta),
                size_geo=GeoValue(size_exp),
                weight_geo=GeoValue(weight_exp),
            )
        )
    return instance.with_jobs(jobs)


def solve_bounded_ratio(band: Instance, params: ParamPack, nr: Optional[NRParams] = None) -> BandResult:
    """(1+δ)-aproximação para uma banda de densidades com razão ≤ (1+δ)^y"""
    nr = nr or NRParams.from_pack(params)
    ledger = StageLedger(instance_hash(band))
    if not band.jobs:
        return BandResult(OrderedSchedule({mc.id: () for mc in band.machines}), 0.0, 0.0, None, ledger)

    normalized, r0 = _normalize_band(band)
    budget = MilpBudget(max_nodes=nr.max_nodes, time_limit=nr.time_limit)
    best: Optional[BandResult] = None
    for guess in distinct_guesses(normalized, params, nr):
        scaled = _scaled(normalized, guess.scale_exp)
        try:
            configs = enumerate_configurations(scaled, nr)
            pi = build_pi(scaled, configs, nr)
        except InfeasibleGuess:
            continue
        slow_heavy = sum(1 for c in configs if c.heavy and nr.is_slow(c.j2))
        ledger.audit("configurations", "no heavy configuration on a slow speed", slow_heavy, 0,
                     guess=f"{guess.job_id}:{guess.b}")
        solution = solve_milp(pi.model, budget)
        if solution.vector is None or solution.status not in (Status.OPTIMAL, Status.BUDGET_EXCEEDED):
            logger.debug(f"palpite ({guess.job_id},{guess.b}): {solution.status.value}")
            continue
        schedule, rounding = round_pi_solution(solution.vector, pi, scaled, nr)
        value = float(cost(band, schedule).total)
        # Z* em unidades da banda: tempos × (1+δ)^scale, pesos × (1+δ)^{r0+scale}
        z_star = solution.objective * float(geo_value(2 * guess.scale_exp + r0, band.delta))
        label = f"{guess.job_id}:{guess.b}"
        ledger.audit(
            "round_pi", "unassigned <= light bound", rounding.unassigned_size, rounding.unassigned_bound,
            guess=label, z_star=z_star, cost=value,
        )
        if best is None or value < best.cost - 1e-12 * max(1.0, abs(best.cost)):
            best = BandResult(schedule, value, z_star, guess, ledger)
    if best is None:
        raise SchedulingError("every scaling guess is infeasible for this band")
    ledger.audit(
        "band", "cost <= (1+delta) Z*", best.cost, (1 + nr.delta) * best.z_star,
        guess=f"{best.guess.job_id}:{best.guess.b}", z_star=best.z_star, cost=best.cost,
    )
    return best


def combine_band_solutions(band_solutions: Sequence[OrderedSchedule], instance: Instance) -> OrderedSchedule:
    """Concatena as bandas por máquina e reordena em ordem natural"""
    per_machine: Dict[int, List[int]] = {mc.id: [] for mc in instance.machines}
    for schedule in band_solutions:
        for mid, seq in schedule.sequences.items():
            per_machine[mid].extend(seq)
    return OrderedSchedule(
        {mid: tuple(j.id for j in natural_order(instance.job(jid) for jid in seq)) for mid, seq in per_machine.items()}
    )


# === DRIVER ===

@dataclass
class NoReleaseReport:
    profile: Profile
    delta: float
    zeta: Optional[int]
    cost: float
    oracle: Optional[float] = None
    constants: Dict[str, float] = field(default_factory=dict)
    ledger: StageLedger = field(default_factory=StageLedger)

    @property
    def ratio(self) -> Optional[float]:
        if self.oracle is None or self.oracle == 0:
            return None
        return self.cost / float(self.oracle)


def eptas_no_release(
    instance: Instance,
    eps: float,
    params: Optional[ParamPack] = None,
    nr: Optional[NRParams] = None,
    oracle_limits: Optional[OracleLimits] = None,
) -> Tuple[OrderedSchedule, NoReleaseReport]:
    """
    EPTAS sem datas de liberação

    Para cada ζ distinto resolve todas as bandas (com cache por banda) e
    devolve o schedule de menor custo avaliado em A.
    """
    params = params or ParamPack.build(eps, Profile.PRACTICAL, release=False)
    nr = nr or NRParams.from_pack(params)
    ledger = StageLedger(instance_hash(instance))
    rounded = round_no_release(instance, params)
    if not instance.jobs:
        empty = OrderedSchedule({mc.id: () for mc in instance.machines})
        return empty, NoReleaseReport(params.profile, nr.delta, None, 0.0, ledger=ledger)

    band_cache: Dict[Instance, BandResult] = {}
    best: Optional[Tuple[float, int, OrderedSchedule]] = None
    for zeta in zeta_candidates(rounded, params):
        shifted = density_shift(rounded, zeta, params)
        results = []
        for pos, band in enumerate(split_into_bands(shifted, params, zeta)):
            if band not in band_cache:
                band_cache[band] = solve_bounded_ratio(band, params, nr)
                ledger.extend(band_cache[band].ledger)
            results.append(band_cache[band])
        combined = combine_band_solutions([r.schedule for r in results], shifted)
        shifted_cost = float(cost(shifted, combined).total)
        band_sum = sum(r.cost for r in results)
        ledger.record("combine", zeta=zeta, z_star=band_sum, cost=shifted_cost)
        value = float(cost(instance, combined).total)
        logger.debug(f"ζ={zeta}: custo em A {value:.6g}")
        if best is None or value < best[0] - 1e-12 * max(1.0, abs(best[0])):
            best = (value, zeta, combined)

    value, zeta, schedule = best
    final = OrderedSchedule(
        {mid: tuple(j.id for j in natural_order(instance.job(jid) for jid in seq)) for mid, seq in schedule.sequences.items()}
    )
    final_cost = float(cost(instance, final).total)
    rounded_cost = float(cost(rounded, final).total)
    ledger.audit("round", "SOL(A) <= SOL(A')", final_cost, rounded_cost, zeta=zeta, cost=final_cost)
    ledger.audit("round", "SOL(A') <= (1+delta)^3 SOL(A)", rounded_cost,
                 (1 + nr.delta) ** 3 * final_cost, zeta=zeta, cost=rounded_cost)
    shifted_cost = float(cost(density_shift(rounded, zeta, params), final).total)
    ledger.audit("density_shift", "SOL(A') <= SOL(A_zeta)", rounded_cost, shifted_cost, zeta=zeta)

    report = NoReleaseReport(
        params.profile, nr.delta, zeta, final_cost,
        constants={
            "delta": nr.delta, "ell": params.ell, "xi": params.xi, "y": params.y, "y_constant": params.y_constant,
            "log_gamma": nr.log_gamma, "g": nr.g_delta if nr.g_delta is not None else -math.inf,
            "f": nr.f_delta if nr.f_delta is not None else -math.inf,
        },
        ledger=ledger,
    )
    if oracle_limits is not None and oracle_limits.admits(instance):
        _, optimum = opt_no_release(instance, oracle_limits)
        report.oracle = float(optimum)
        ledger.audit("oracle", "cost <= (1+eps) OPT", final_cost, (1 + eps) * float(optimum),
                     zeta=zeta, cost=final_cost, oracle=float(optimum), ratio=report.ratio)
    logger.info(f"eptas_no_release: ζ={zeta}, custo={final_cost:.6g}")
    return final, report

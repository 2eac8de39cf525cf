#!/usr/bin/env python3
"""
Rounding - Instance Transformations and Parameter Packs

Todas as transformações de instância:
- arredondamento geométrico (A → A′), com e sem datas de liberação
- deslocamento de densidade (A_ζ) e decomposição em bandas
- divisões e pseudo-tamanhos (A″)

ParamPack guarda cada constante derivada de ε em dois perfis:
`faithful` (constantes da análise) e `practical` (magnitudes executáveis).

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .core import (
    DomainError,
    GeoValue,
    Instance,
    Job,
    Machine,
    Number,
    UnsupportedInstanceError,
    geo_ceil,
    geo_floor,
    geo_value,
)

logger = logging.getLogger(__name__)

PRACTICAL_Y_CAP = 12


class Profile(str, Enum):
    """Perfil de constantes"""
    FAITHFUL = "faithful"      # Constantes da análise (apenas testes de fórmula)
    PRACTICAL = "practical"    # Magnitudes executáveis, garantia empírica


class ParamPack(BaseModel):
    """
    Constantes derivadas de ε

    δ = 1/inv_delta sempre; ξ = ⌈ℓ·log_{1+δ}(1/δ)⌉; os expoentes de
    densidade se agrupam em blocos Ω_c de tamanho ξ e a cada `period`
    blocos um deles é proibido. y + 1 = (period − 1)·ξ é o comprimento
    de cada sequência permitida.
    No perfil practical as constantes derivadas de y (γ, D) usam
    `y_constant` = min(y, y_cap); as bandas continuam com o y estrutural.
    """
    model_config = ConfigDict(frozen=True)

    eps: float
    inv_delta: int
    ell: int
    xi: int
    period: int
    y: int
    y_cap: Optional[int] = None
    release: bool = False
    profile: Profile = Profile.PRACTICAL
    exact: bool = False

    @field_validator("eps")
    @classmethod
    def _check_eps(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError(f"eps must lie in (0, 1], got {value}")
        return value

    @field_validator("inv_delta")
    @classmethod
    def _check_inv_delta(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"1/delta must be an integer ≥ 2, got {value}")
        return value

    @model_validator(mode="after")
    def _check_structure(self) -> "ParamPack":
        if self.period < 2:
            raise ValueError("period must be at least 2")
        if self.y + 1 != (self.period - 1) * self.xi:
            raise ValueError("y + 1 must equal (period - 1)·xi")
        if self.y_cap is not None and self.y_cap < 1:
            raise ValueError(f"y_cap must be positive, got {self.y_cap}")
        return self

    @property
    def y_constant(self) -> int:
        """y usado nas constantes derivadas (γ, D)"""
        if self.y_cap is None:
            return self.y
        return min(self.y, self.y_cap)

    @property
    def delta(self) -> Number:
        if self.exact:
            return Fraction(1, self.inv_delta)
        return 1.0 / self.inv_delta

    @property
    def empirical_only(self) -> bool:
        return self.profile is Profile.PRACTICAL

    @classmethod
    def build(
        cls,
        eps: float,
        profile: Profile = Profile.PRACTICAL,
        release: bool = False,
        inv_delta: Optional[int] = None,
        ell: Optional[int] = None,
        period: Optional[int] = None,
        exact: bool = False,
    ) -> "ParamPack":
        """
        Constrói o pacote

        faithful: δ ≤ ε/48 (δ ≤ 1/8 sem liberação, δ ≤ 1/36 com), ℓ = 3 ou 25,
        period = 1/δ^{ℓ+1}.
        practical: δ = 1/max(8, ⌈4/ε⌉), ℓ = 3, period = 8, y_cap = 12.
        """
        profile = Profile(profile)
        if not 0 < eps <= 1:
            raise DomainError(f"eps must lie in (0, 1], got {eps}")
        if profile is Profile.FAITHFUL:
            floor_inv = 36 if release else 8
            inv = inv_delta or max(floor_inv, math.ceil(48 / eps))
            ell = ell if ell is not None else (25 if release else 3)
            period = period or inv ** (ell + 1)
            y_cap = None
        else:
            inv = inv_delta or max(8, math.ceil(4 / eps))
            ell = ell if ell is not None else 3
            period = period or 8
            y_cap = PRACTICAL_Y_CAP
        if profile is Profile.FAITHFUL and not release and not 3 <= ell <= 5:
            raise DomainError(f"faithful ell must lie in [3, 5], got {ell}")
        delta = Fraction(1, inv)
        xi = geo_ceil(Fraction(inv) ** ell, delta)
        y = xi * period - xi - 1
        pack = cls(
            eps=eps, inv_delta=inv, ell=ell, xi=xi, period=period, y=y, y_cap=y_cap,
            release=release, profile=profile, exact=exact,
        )
        logger.debug(f"ParamPack {profile.value}: 1/δ={inv}, ℓ={ell}, ξ={xi}, period={period}, y={y}, y_cap={y_cap}")
        return pack


# === DENSIDADES PROIBIDAS E BANDAS ===

@dataclass(frozen=True)
class DensityBandMap:
    """
    Expoente β é proibido para ζ sse β ∈ Ω_c com c ≡ ζ (mod period),
    onde Ω_c = {cξ+1, …, (c+1)ξ}.
    """
    zeta: int
    xi: int
    period: int

    def __post_init__(self):
        if not 0 <= self.zeta < self.period:
            raise DomainError(f"zeta must lie in [0, {self.period - 1}], got {self.zeta}")

    @classmethod
    def for_pack(cls, zeta: int, params: ParamPack) -> "DensityBandMap":
        return cls(zeta, params.xi, params.period)

    def block(self, beta: int) -> int:
        return (beta - 1) // self.xi

    def is_forbidden(self, beta: int) -> bool:
        return self.block(beta) % self.period == self.zeta

    def shifted(self, beta: int) -> int:
        return beta + self.xi if self.is_forbidden(beta) else beta

    def band_index(self, beta: int) -> int:
        if self.is_forbidden(beta):
            raise DomainError(f"density exponent {beta} is forbidden for zeta={self.zeta}")
        return (self.block(beta) - self.zeta - 1) // self.period


def _require_rounded(instance: Instance) -> None:
    if not instance.is_rounded:
        raise DomainError("operation requires a rounded instance")


def _round_machines(instance: Instance, delta: Number) -> Tuple[List[Machine], int]:
    exponents = {mc.id: geo_floor(mc.speed, delta) for mc in instance.machines}
    top = max(exponents.values())
    machines = [
        Machine(mc.id, geo_value(exponents[mc.id] - top, delta), GeoValue(exponents[mc.id] - top))
        for mc in instance.machines
    ]
    return machines, top


def round_no_release(instance: Instance, params: ParamPack) -> Instance:
    """
    A → A′ sem datas de liberação

    Velocidades para baixo, tamanhos e pesos para cima em potências de 1+δ.
    Velocidades e tamanhos são deslocados pelo mesmo expoente para que s_1 = 1
    sem mudar nenhum tempo de processamento.
    """
    delta = params.delta
    if any(j.release > 0 for j in instance.jobs):
        raise UnsupportedInstanceError("round_no_release called on an instance with release dates")
    machines, top = _round_machines(instance, delta)
    jobs = []
    for job in instance.jobs:
        size_exp = geo_ceil(job.size, delta) - top
        weight_exp = geo_ceil(job.weight, delta)
        jobs.append(
            Job(
                job.id,
                geo_value(size_exp, delta),
                geo_value(weight_exp, delta),
                0,
                GeoValue(size_exp),
                GeoValue(weight_exp),
            )
        )
    return Instance(tuple(jobs), tuple(machines), False, delta)


def round_release(instance: Instance, params: ParamPack) -> Instance:
    """A → A′ com r′_j = (1+δ)^⌈log(ρ_j + β)⌉, β = δ²·a_min/v_max"""
    delta = params.delta
    if not instance.jobs:
        raise DomainError("round_release needs at least one job")
    machines, top = _round_machines(instance, delta)
    v_max = max(mc.speed for mc in instance.machines)
    beta = delta * delta * min(j.size for j in instance.jobs) / v_max
    jobs = []
    for job in instance.jobs:
        size_exp = geo_ceil(job.size, delta) - top
        weight_exp = geo_ceil(job.weight, delta)
        release_exp = geo_ceil(job.release + beta, delta)
        jobs.append(
            Job(
                job.id,
                geo_value(size_exp, delta),
                geo_value(weight_exp, delta),
                geo_value(release_exp, delta),
                GeoValue(size_exp),
                GeoValue(weight_exp),
                GeoValue(release_exp),
            )
        )
    return Instance(tuple(jobs), tuple(machines), True, delta)


def density_shift(instance: Instance, zeta: int, params: ParamPack) -> Instance:
    """Jobs com densidade proibida para ζ têm o peso multiplicado por (1+δ)^ξ"""
    _require_rounded(instance)
    band_map = DensityBandMap.for_pack(zeta, params)
    delta = instance.delta if instance.delta is not None else params.delta
    jobs = []
    for job in instance.jobs:
        if band_map.is_forbidden(job.density_exp):
            weight_exp = job.weight_exp + params.xi
            job = replace(job, weight=geo_value(weight_exp, delta), weight_geo=GeoValue(weight_exp))
        jobs.append(job)
    return instance.with_jobs(jobs)


def split_into_bands(instance: Instance, params: ParamPack, zeta: int) -> List[Instance]:
    """Sub-instâncias por sequência de densidades permitidas, em densidade crescente"""
    _require_rounded(instance)
    band_map = DensityBandMap.for_pack(zeta, params)
    groups: Dict[int, List[Job]] = {}
    for job in instance.jobs:
        groups.setdefault(band_map.band_index(job.density_exp), []).append(job)
    return [instance.with_jobs(groups[key]) for key in sorted(groups)]


def zeta_candidates(instance: Instance, params: ParamPack) -> List[int]:
    """
    Valores de ζ que produzem instâncias distintas

    Só importa quais resíduos de bloco as densidades ocupam; todo ζ fora
    desses resíduos gera a mesma instância, então basta um representante.
    A lista tem no máximo um ζ livre; o ledger mostra só esse candidato.
    """
    _require_rounded(instance)
    residues = sorted({((j.density_exp - 1) // params.xi) % params.period for j in instance.jobs})
    free = next((z for z in range(params.period) if z not in residues), None)
    return residues + ([free] if free is not None else [])


# === DIVISÕES ===

@dataclass(frozen=True)
class DivisionInfo:
    size_exp: int
    division: int
    subdivision: int
    pseudo_size: Number
    delta_count: int


def _times_power_of_two(x: Number, k: int) -> Number:
    if isinstance(x, Fraction):
        return x * Fraction(2) ** k
    return math.ldexp(x, k)


def divisions(size_exp: int, delta: Number) -> DivisionInfo:
    """
    Divisão de um tamanho (1+δ)^i

    subdivisão k: 2^k·(1+δ)^i ∈ (1, 2]; divisão k′ = ⌈log_{1+δ} 2^k⌉ + i ∈ [1, Δ];
    pseudo-tamanho π = (1+δ)^{k′}/2^k ∈ [(1+δ)^i, (1+δ)^{i+1}).
    """
    x = geo_value(size_exp, delta)
    k = 1 + math.floor(-math.log2(float(x)))
    while _times_power_of_two(x, k) > 2:
        k -= 1
    while _times_power_of_two(x, k) <= 1:
        k += 1
    two_k = Fraction(2) ** k if isinstance(delta, Fraction) else math.ldexp(1.0, k)
    division = geo_ceil(two_k, delta) + size_exp
    pseudo = _times_power_of_two(geo_value(division, delta), -k)
    return DivisionInfo(size_exp, division, k, pseudo, geo_ceil(2, delta))


def to_pseudo_instance(instance: Instance, params: Optional[ParamPack] = None) -> Instance:
    """A′ → A″: cada tamanho (1+δ)^i vira π_i; o expoente de classe é mantido"""
    if not instance.jobs:
        return instance
    _require_rounded(instance)
    delta = instance.delta if instance.delta is not None else params.delta
    jobs = [replace(job, size=divisions(job.size_exp, delta).pseudo_size) for job in instance.jobs]
    return instance.with_jobs(jobs)

#!/usr/bin/env python3
"""
Test Suite - Rounding Module

Testes de ParamPack, arredondamento geométrico, deslocamento de densidade,
bandas e divisões.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wct_eptas.core import DomainError, UnsupportedInstanceError, geo_value
from wct_eptas.rounding import (
    DensityBandMap,
    ParamPack,
    Profile,
    density_shift,
    divisions,
    round_no_release,
    round_release,
    split_into_bands,
    to_pseudo_instance,
    zeta_candidates,
)

from .conftest import build_instance


class TestParamPack:
    """Testes das constantes derivadas de ε"""

    @pytest.mark.parametrize("eps,inv", [(1.0, 8), (0.5, 8), (0.25, 16), (0.125, 32)])
    def test_practical_delta(self, eps, inv):
        """δ = 1/max(8, ⌈4/ε⌉)"""
        pack = ParamPack.build(eps)
        assert pack.inv_delta == inv
        assert pack.empirical_only

    def test_structure(self):
        """y + 1 = (period − 1)·ξ"""
        pack = ParamPack.build(0.5)
        assert pack.y + 1 == (pack.period - 1) * pack.xi
        assert geo_value(pack.xi, Fraction(1, pack.inv_delta)) >= pack.inv_delta ** pack.ell

    def test_practical_y_cap(self):
        """No perfil practical as constantes usam min(y, 12); as bandas mantêm o y estrutural"""
        pack = ParamPack.build(0.5)
        assert pack.y > 12
        assert pack.y_cap == 12
        assert pack.y_constant == 12
        faithful = ParamPack.build(1.0, Profile.FAITHFUL)
        assert faithful.y_cap is None
        assert faithful.y_constant == faithful.y

    def test_y_cap_must_be_positive(self):
        pack = ParamPack.build(0.5)
        with pytest.raises(ValueError):
            ParamPack(**{**pack.model_dump(), "y_cap": 0})

    def test_faithful_release_floor(self):
        """Perfil fiel com liberação: δ ≤ 1/36 e ℓ = 25"""
        pack = ParamPack.build(1.0, Profile.FAITHFUL, release=True)
        assert pack.inv_delta >= 48
        assert pack.ell == 25
        assert not pack.empirical_only

    def test_faithful_ell_range(self):
        with pytest.raises(DomainError):
            ParamPack.build(0.5, Profile.FAITHFUL, ell=7)

    @pytest.mark.parametrize("eps", [0, -0.1, 1.5])
    def test_invalid_eps(self, eps):
        with pytest.raises(DomainError):
            ParamPack.build(eps)

    def test_exact_delta(self):
        assert ParamPack.build(0.5, exact=True).delta == Fraction(1, 8)


class TestRounding:
    """Testes de A → A′"""

    def test_fastest_machine_has_unit_speed(self, two_machine_instance):
        rounded = round_no_release(two_machine_instance, ParamPack.build(0.5))
        assert rounded.machines[0].speed == pytest.approx(1.0)
        assert rounded.is_rounded

    def test_processing_times_bracketed(self, two_machine_instance):
        """p/s só cresce e no máximo por (1+δ)²"""
        pack = ParamPack.build(0.5)
        rounded = round_no_release(two_machine_instance, pack)
        for job in two_machine_instance.jobs:
            for machine in two_machine_instance.machines:
                original = job.size / machine.speed
                new = rounded.job(job.id).size / rounded.speed(machine.id)
                assert original <= new * (1 + 1e-9)
                assert new <= (1 + pack.delta) ** 2 * original * (1 + 1e-9)

    def test_weights_round_up(self, two_machine_instance):
        pack = ParamPack.build(0.5)
        rounded = round_no_release(two_machine_instance, pack)
        for job in two_machine_instance.jobs:
            assert job.weight <= rounded.job(job.id).weight <= (1 + pack.delta) * job.weight * (1 + 1e-9)

    def test_release_dates_rejected(self, release_instance):
        with pytest.raises(UnsupportedInstanceError):
            round_no_release(release_instance, ParamPack.build(0.5))

    def test_release_rounding_positive(self, release_instance):
        """Toda liberação arredondada é positiva e não diminui"""
        rounded = round_release(release_instance, ParamPack.build(0.5, release=True))
        for job in release_instance.jobs:
            assert rounded.job(job.id).release > 0
            assert rounded.job(job.id).release >= job.release


class TestDensityBands:
    """Testes de ζ, bandas e densidades proibidas"""

    def test_forbidden_blocks(self):
        band_map = DensityBandMap(zeta=1, xi=3, period=4)
        assert [band_map.is_forbidden(beta) for beta in range(1, 8)] == [False] * 3 + [True] * 3 + [False]
        with pytest.raises(DomainError):
            band_map.band_index(4)

    def test_zeta_range(self):
        with pytest.raises(DomainError):
            DensityBandMap(zeta=4, xi=3, period=4)

    def test_shift_clears_forbidden(self, two_machine_instance):
        """Depois do deslocamento nenhuma densidade é proibida"""
        pack = ParamPack.build(0.5)
        rounded = round_no_release(two_machine_instance, pack)
        for zeta in zeta_candidates(rounded, pack):
            shifted = density_shift(rounded, zeta, pack)
            band_map = DensityBandMap.for_pack(zeta, pack)
            assert not any(band_map.is_forbidden(j.density_exp) for j in shifted.jobs)

    def test_single_free_zeta(self, two_machine_instance):
        """Resíduos ocupados mais um único ζ livre"""
        pack = ParamPack.build(0.5)
        rounded = round_no_release(two_machine_instance, pack)
        candidates = zeta_candidates(rounded, pack)
        residues = {((j.density_exp - 1) // pack.xi) % pack.period for j in rounded.jobs}
        free = [z for z in candidates if z not in residues]
        assert set(candidates) >= residues
        assert len(free) == (1 if len(residues) < pack.period else 0)

    def test_bands_partition_jobs(self):
        """Bandas cobrem todos os jobs, em densidade crescente"""
        instance = build_instance(
            [1.0, 1.0],
            [(1.0, 1.0, 0), (1.0, 1e4, 0), (1.0, 1e-4, 0), (2.0, 3.0, 0), (1.0, 1e8, 0)],
        )
        pack = ParamPack.build(0.5)
        rounded = round_no_release(instance, pack)
        zeta = zeta_candidates(rounded, pack)[-1]
        shifted = density_shift(rounded, zeta, pack)
        bands = split_into_bands(shifted, pack, zeta)
        assert sorted(j.id for band in bands for j in band.jobs) == [1, 2, 3, 4, 5]
        tops = [max(j.density_exp for j in band.jobs) for band in bands]
        bottoms = [min(j.density_exp for j in band.jobs) for band in bands]
        assert all(tops[i] < bottoms[i + 1] for i in range(len(bands) - 1))

    def test_zeta_candidates_distinct(self, two_machine_instance):
        pack = ParamPack.build(0.5)
        candidates = zeta_candidates(round_no_release(two_machine_instance, pack), pack)
        assert len(candidates) == len(set(candidates))
        assert all(0 <= z < pack.period for z in candidates)


class TestDivisions:
    """Testes de divisões e pseudo-tamanhos"""

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=-60, max_value=60))
    def test_pseudo_size_in_class(self, size_exp):
        """π_i ∈ [(1+δ)^i, (1+δ)^{i+1}) e 2^k·(1+δ)^i ∈ (1, 2]"""
        delta = Fraction(1, 8)
        info = divisions(size_exp, delta)
        assert geo_value(size_exp, delta) <= info.pseudo_size < geo_value(size_exp + 1, delta)
        scaled = geo_value(size_exp, delta) * Fraction(2) ** info.subdivision
        assert 1 < scaled <= 2
        assert 1 <= info.division <= info.delta_count

    def test_pseudo_instance_keeps_class(self, two_machine_instance):
        pack = ParamPack.build(0.5)
        rounded = round_no_release(two_machine_instance, pack)
        pseudo = to_pseudo_instance(rounded, pack)
        for job in rounded.jobs:
            assert pseudo.job(job.id).size_exp == job.size_exp
            assert pseudo.job(job.id).size >= job.size * (1 - 1e-12)

#!/usr/bin/env python3
"""
Test Suite - Release-Date EPTAS

Testes de ReleaseParams, release shifting, paletas, máquina rosa,
eliminação de intervalos esparsos, combinação de bandas e do driver
eptas_release.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

import pytest
from pydantic import ValidationError

from wct_eptas import release_eptas
from wct_eptas.cli import Shape, generate
from wct_eptas.core import (
    DomainError,
    Instance,
    Job,
    Machine,
    Slot,
    StageLedger,
    TimedSchedule,
    cost,
    is_timely,
    pseudo_cost,
    realize,
    validate,
)
from wct_eptas.milp import LinearModel
from wct_eptas.oracle import OracleLimits
from wct_eptas.release_eptas import (
    ConfigurationR,
    FallbackRequired,
    Palette,
    PaletteLimitError,
    PiRelease,
    ReleaseParams,
    audit_properties,
    choose_k,
    combine_density_bands,
    compute_palette,
    eliminate_sparse,
    ensure_pink,
    enumerate_palettes,
    eptas_release,
    idle_insertion_total,
    k_candidates,
    machine_types,
    merge_fragment,
    palette_count,
    preprocess_bounded,
    property_no_large,
    release_idle_insertion,
    release_shift,
    round_pi_release,
    sort_tail_by_density,
    sparse_intervals,
    universal_palette,
)
from wct_eptas.rounding import ParamPack, round_release
from wct_eptas.timeline import time_stretch

from .conftest import build_instance


@pytest.fixture
def pack() -> ParamPack:
    return ParamPack.build(0.5, release=True)


@pytest.fixture
def rounded(pack, release_instance) -> Instance:
    return round_release(release_instance, pack)


@pytest.fixture
def small_rp(pack, rounded) -> ReleaseParams:
    """Poucos valores de k e α pequeno, para que D_{i,k} seja pequeno"""
    return ReleaseParams.from_pack(pack, rounded, k_count=3, log_alpha=2.5)


# === PARÂMETROS ===

class TestReleaseParams:
    """Testes das constantes do caso com liberação"""

    def test_practical_defaults(self, pack):
        rp = ReleaseParams.from_pack(pack)
        assert rp.y_hat == 4
        assert rp.palette_budget == 2
        assert rp.fast_types == 8 ** 7 + 1
        assert rp.pink_machines_needed == 2 * 8 ** 7 + 3
        assert rp.k_count == 4 * 8 ** 5
        assert rp.alpha == pytest.approx(4 * 8 ** 4, rel=1e-9)
        assert not rp.enforce

    def test_instance_sets_theta(self, pack, rounded):
        rp = ReleaseParams.from_pack(pack, rounded)
        assert rp.theta == min(j.release_exp for j in rounded.jobs)
        assert rp.L > 0 and 0 < rp.gamma_R < 1

    def test_needs_rounded_instance(self, pack, release_instance):
        with pytest.raises(DomainError):
            ReleaseParams.from_pack(pack, release_instance)

    @pytest.mark.parametrize(
        "override",
        [{"log_gamma": 1.0}, {"log_B": 0.5}, {"log_alpha": 0.5}, {"k_count": 0}, {"palette_budget": 0}],
    )
    def test_invalid_overrides(self, pack, override):
        with pytest.raises(ValidationError):
            ReleaseParams.from_pack(pack, **override)

    def test_q_and_locate(self, small_rp):
        """Q_{i,k} = θ + ⌈(k + i·k_count)·log α⌉ e locate inverte Q"""
        theta = small_rp.theta
        assert [small_rp.Q(0, k) - theta for k in range(3)] == [0, 3, 5]
        assert small_rp.Q(1, 0) - theta == 8
        assert small_rp.Q(0, 3) == small_rp.Q(1, 0)
        assert small_rp.locate(theta + 4) == (0, 1)
        assert small_rp.locate(theta + 8) == (1, 0)
        assert small_rp.locate(theta + 14) == (1, 2)
        with pytest.raises(DomainError):
            small_rp.locate(theta - 1)

    def test_measured_configurations(self, pack):
        rp = ReleaseParams.from_pack(pack)
        updated = rp.with_measured_configurations(10)
        assert updated.log_D < rp.log_D
        assert updated.log_B > rp.log_B


# === RELEASE SHIFTING ===

class TestReleaseShift:
    """Testes de A_k, A_{ik} e da inserção de ociosidade"""

    def test_shift_moves_only_class_k(self, rounded, small_rp):
        for k in range(small_rp.k_count):
            shifted, parts = release_shift(rounded, k, small_rp)
            assert sorted(j.id for part in parts.values() for j in part.jobs) == sorted(j.id for j in rounded.jobs)
            for job in rounded.jobs:
                i, kk = small_rp.locate(job.release_exp)
                new = shifted.job(job.id).release_exp
                assert new == (small_rp.Q(i, k + 1) if kk == k else job.release_exp)

    def test_k_out_of_range(self, rounded, small_rp):
        with pytest.raises(DomainError):
            release_shift(rounded, small_rp.k_count, small_rp)

    def test_idle_insertion_delays(self, rounded, small_rp):
        schedule = realize(rounded, {rounded.machines[0].id: [j.id for j in rounded.jobs]}, timely_delta=small_rp.delta)
        for k in range(small_rp.k_count):
            delayed = release_idle_insertion(schedule, rounded, k, small_rp)
            for jid, slot in schedule.slots.items():
                assert delayed.slots[jid].completion >= slot.completion
            validate(rounded, delayed)

    def test_idle_insertion_total(self, rounded, small_rp):
        schedule = realize(rounded, {rounded.machines[0].id: [j.id for j in rounded.jobs]}, timely_delta=small_rp.delta)
        ledger = StageLedger()
        total = idle_insertion_total(schedule, rounded, small_rp, ledger)
        assert total >= small_rp.k_count * float(cost(rounded, schedule).total) * (1 - 1e-9)
        assert [row.stage for row in ledger.rows] == ["release_shift"]

    def test_k_candidates_and_choice(self, rounded, small_rp):
        candidates = k_candidates(rounded, small_rp)
        assert len(candidates) == len(set(candidates))
        assert all(0 <= k < small_rp.k_count for k in candidates)
        values = {k: float((k - 1) ** 2) for k in range(small_rp.k_count)}
        k, _, value = choose_k(rounded, small_rp, lambda kk: (TimedSchedule({}), values[kk]))
        assert value == min(values[c] for c in candidates)
        assert k == min(c for c in candidates if values[c] == value)


# === PROPRIEDADES E ESPARSOS ===

class TestStructure:
    """Testes das propriedades estruturais e de intervalos esparsos"""

    def test_no_large(self, pack, release_instance):
        rp = ReleaseParams.from_pack(pack)
        schedule = realize(release_instance, {1: (1, 2), 2: (3, 4)}, timely_delta=rp.delta)
        assert property_no_large(release_instance, schedule, 1.0, rp)
        assert not property_no_large(release_instance, schedule, 1e-30, rp)

    def test_property_rows_fail_on_density_inversion(self, pack):
        """Job denso depois de um job leve, ambos após Ψ: propriedades 1 e 3 falham"""
        instance = build_instance([1.0], [(1.0, 1.0, 0.0), (1.0, 10.0, 0.3)], has_release=True)
        rp = ReleaseParams.from_pack(pack)
        schedule = realize(instance, {1: [1, 2]}, timely_delta=rp.delta, not_before={1: 0.5})
        ledger = StageLedger()
        assert not audit_properties(ledger, "combine_bands", instance, schedule, 0.3, rp)
        assert [row.passed for row in ledger.rows] == [False, True, False]
        assert not ledger.all_passed

    def test_sorted_tail_satisfies_properties(self, pack):
        instance = build_instance([1.0], [(1.0, 1.0, 0.0), (1.0, 10.0, 0.3)], has_release=True)
        rp = ReleaseParams.from_pack(pack)
        schedule = realize(instance, {1: [1, 2]}, timely_delta=rp.delta, not_before={1: 0.5})
        ordered = sort_tail_by_density(instance, schedule, 0.3, rp.delta)
        validate(instance, ordered)
        assert ordered.machine_jobs(1) == [2, 1]
        ledger = StageLedger()
        assert audit_properties(ledger, "combine_bands", instance, ordered, 0.3, rp)
        assert ledger.all_passed

    def test_sparse_intervals(self):
        instance = build_instance([1.0, 1.0], [(1e-5, 1.0, 10.0), (1e-5, 1.0, 10.0)], has_release=True)
        schedule = realize(instance, {1: [1], 2: [2]})
        sparse = sparse_intervals(instance, schedule, 0.125)
        assert list(sparse.values()) == [[1, 2]]

    def test_eliminate_sparse_merges(self, pack):
        instance = build_instance([1.0, 1.0], [(1e-5, 1.0, 10.0), (1e-5, 1.0, 10.0)], has_release=True)
        rp = ReleaseParams.from_pack(pack)
        schedule = realize(instance, {1: [1], 2: [2]}, timely_delta=rp.delta)
        result = eliminate_sparse(instance, schedule, rp)
        validate(instance, result.schedule)
        assert result.merges == 1
        assert all(len(ms) <= 1 for ms in sparse_intervals(instance, result.schedule, rp.delta).values())
        assert any("pink-machine phase skipped" in row.check for row in result.ledger.rows)


# === PALETAS ===

class TestPalettes:
    """Testes de Palette e da enumeração"""

    def test_palette_basics(self):
        palette = Palette((frozenset({0}), frozenset({0, 1, 2})), 2, pink=2)
        assert palette.universe == frozenset({0, 1, 2})
        assert palette.is_pink(2) and not palette.is_pink(1)
        assert palette.admits(1, [0, 5])
        assert not palette.admits(1, [1])
        assert palette.admits(3, [1])
        assert palette.label == "1/7@2"

    def test_shifted(self):
        palette = Palette((frozenset({0}),), 2)
        assert palette.shifted(1).color(1) == frozenset({0, 1})

    def test_enumeration(self):
        palettes = list(enumerate_palettes(1, 2))
        assert len(palettes) == palette_count(1, 2) == 16
        assert palettes[0] == universal_palette(1, 2)
        with_pink = list(enumerate_palettes(1, 2, pink=1))
        assert len(with_pink) == 4
        assert all(p.is_pink(1) for p in with_pink)

    def test_cap(self):
        with pytest.raises(PaletteLimitError) as info:
            enumerate_palettes(4, 3, cap=100)
        assert info.value.count == 2 ** 15

    def test_compute_palette(self):
        """Máquina ocupada em J_1 e J_2 sem inícios: a cor exclui esses intervalos"""
        instance = Instance((Job(1, 2.375, 1.0, 1.0),), (Machine(1, 1.0),), True)
        schedule = TimedSchedule({1: Slot(1, 3.375)})
        palette = compute_palette(instance, schedule, 0.5, 3, fast_types=1)
        assert palette.color(1) == frozenset({0, 3})
        assert palette.pink is None


# === MÁQUINA ROSA ===

class TestPinkMachine:
    """Testes de ensure_pink"""

    @pytest.fixture
    def five_machines(self) -> Instance:
        return build_instance(
            [3.0, 2.0, 2.0, 1.0, 1.0],
            [(2.0, 1.0, 0.0), (1.0, 2.0, 0.5), (3.0, 1.0, 1.0), (1.0, 1.0, 0.0), (2.0, 3.0, 2.0), (1.5, 1.0, 0.0)],
            has_release=True,
        )

    def test_pink_has_no_early_start(self, pack, five_machines):
        rp = ReleaseParams.from_pack(pack, fast_types=2)
        sequences = {1: (1, 2), 2: (3, 4), 3: (5,), 4: (6,), 5: ()}
        schedule = realize(five_machines, sequences, timely_delta=rp.delta)
        psi = 3.0
        result = ensure_pink(five_machines, schedule, rp, psi)
        validate(five_machines, result.schedule)
        assert five_machines.machine_index(result.pink) == 2
        for jid in result.schedule.machine_jobs(result.pink):
            assert result.schedule.start(five_machines, jid) > psi
        audit = [row for row in result.ledger.rows if row.check == "pink machine has no start up to psi"]
        assert audit and audit[0].passed

    def test_too_few_machines(self, pack, release_instance):
        rp = ReleaseParams.from_pack(pack, fast_types=2)
        schedule = realize(release_instance, {1: (1, 2), 2: (3, 4)}, timely_delta=rp.delta)
        with pytest.raises(FallbackRequired) as info:
            ensure_pink(release_instance, schedule, rp, 1.0)
        assert info.value.needed == 5

    def test_needs_two_fast_types(self, pack, release_instance):
        rp = ReleaseParams.from_pack(pack, fast_types=1)
        with pytest.raises(DomainError):
            ensure_pink(release_instance, TimedSchedule({}), rp, 1.0)

    def test_machine_types(self, pack, five_machines):
        rounded = round_release(five_machines, pack)
        rp = ReleaseParams.from_pack(pack, rounded, fast_types=2)
        types = machine_types(rounded, rp)
        assert [t.singleton for t in types[:2]] == [True, True]
        assert sorted(mid for t in types for mid in t.machine_ids) == [1, 2, 3, 4, 5]
        assert all(not t.singleton for t in types[2:])


# === BANDAS ===

class TestBands:
    """Testes de pré-processamento e combinação de bandas"""

    def test_preprocess_removes_tiny_batch(self, pack):
        instance = build_instance([1.0], [(5.0, 1.0, 0.0), (1e-6, 1.0, 5.0)], has_release=True)
        band = round_release(instance, pack)
        rp = ReleaseParams.from_pack(pack, band)
        horizon = max(j.release_exp for j in band.jobs) + 2
        reduced, fragment = preprocess_bounded(band, universal_palette(horizon, 1), rp)
        assert [j.id for j in reduced.jobs] == [1]
        assert set(fragment.slots) == {2}
        assert fragment.start(band, 2) >= band.job(2).release

    def test_merge_empty_fragment(self, pack, release_instance):
        schedule = realize(release_instance, {1: (1, 2), 2: (3, 4)})
        assert merge_fragment(release_instance, schedule, TimedSchedule({}), 0.125) is schedule

    def test_single_band_passthrough(self, pack, release_instance):
        rp = ReleaseParams.from_pack(pack)
        schedule = realize(release_instance, {1: (1, 2), 2: (3, 4)}, timely_delta=rp.delta)
        combined, ledger = combine_density_bands(release_instance, [schedule, TimedSchedule({})], rp)
        assert combined is schedule
        assert not ledger.rows

    def test_two_bands_on_one_machine(self, pack, release_instance):
        """Bandas sobrepostas viram um schedule válido com os gaps auditados"""
        rp = ReleaseParams.from_pack(pack)
        low = realize(release_instance.subset([1, 3]), {1: (1,), 2: (3,)}, timely_delta=rp.delta)
        high = realize(release_instance.subset([2, 4]), {1: (2, 4)}, timely_delta=rp.delta)
        combined, ledger = combine_density_bands(release_instance, [low, high], rp)
        validate(release_instance, combined)
        assert is_timely(combined, release_instance, rp.delta)[0]
        gaps = [row for row in ledger.rows if "gap load" in row.check]
        assert all(row.passed for row in gaps)


# === ARREDONDAMENTO DE Π ===

class TestRoundPiRelease:
    """Testes do arredondamento da solução do MILP com liberação"""

    def test_leftovers_after_two_stretches(self, pack, monkeypatch):
        """Com sobras, o schedule parcial passa por dois time stretchings"""
        instance = round_release(build_instance([1.0], [(1.0, 1.0, 0.5), (1.0, 2.0, 0.5)], True), pack)
        rp = ReleaseParams.from_pack(pack, instance)
        first = instance.job(1)
        kind = (first.density_exp, first.size_exp, first.release_exp)
        config = ConfigurationR(
            1, instance.machines[0].speed_exp, ((kind[0], kind[1], kind[1], kind[2], 1),), (),
            (kind,), 0.0, frozenset(), 0.0,
        )
        pi = PiRelease(LinearModel("round_pi"), [config], machine_types(instance, rp), [0], {})
        calls = []

        def counting(*args, **kwargs):
            calls.append(args)
            return time_stretch(*args, **kwargs)

        monkeypatch.setattr(release_eptas, "time_stretch", counting)
        schedule, report = round_pi_release([1.0], pi, instance, rp)
        assert report.leftovers == [2]
        assert len(calls) == 2
        validate(instance, schedule)
        assert is_timely(schedule, instance, rp.delta)[0]

    def test_no_leftovers_keeps_partial(self, pack):
        instance = round_release(build_instance([1.0], [(1.0, 1.0, 0.5)], True), pack)
        rp = ReleaseParams.from_pack(pack, instance)
        job = instance.job(1)
        kind = (job.density_exp, job.size_exp, job.release_exp)
        config = ConfigurationR(
            1, instance.machines[0].speed_exp, ((kind[0], kind[1], kind[1], kind[2], 1),), (),
            (kind,), 0.0, frozenset(), 0.0,
        )
        pi = PiRelease(LinearModel("round_pi"), [config], machine_types(instance, rp), [0], {})
        schedule, report = round_pi_release([1.0], pi, instance, rp)
        assert report.leftovers == []
        assert schedule.sequences() == {instance.machines[0].id: (1,)}


# === DRIVER ===

class TestEptasRelease:
    """Testes do driver com datas de liberação"""

    def test_empty_instance(self):
        instance = build_instance([1.0], [], has_release=True)
        schedule, report = eptas_release(instance, 0.5)
        assert schedule.slots == {} and report.cost == 0.0

    def test_oracle_fallback(self, release_instance):
        """Com poucas máquinas o oracle timely em pseudo-custo resolve a instância"""
        schedule, report = eptas_release(release_instance, 0.5)
        assert report.fallback == "oracle"
        assert report.ratio == pytest.approx(1.0)
        validate(release_instance, schedule)
        assert is_timely(schedule, release_instance, report.delta)[0]
        assert report.cost == pytest.approx(float(pseudo_cost(schedule, release_instance, report.delta).total))

    @pytest.mark.slow
    def test_pipeline_without_pink_step(self):
        instance = build_instance(
            [2.0, 1.0], [(2.0, 1.0, 0.0), (1.0, 3.0, 1.5), (3.0, 2.0, 0.5)], has_release=True
        )
        schedule, report = eptas_release(instance, 1.0, fallback=False, oracle_limits=OracleLimits.for_release())
        assert report.fallback == "no-pink"
        assert report.k is not None
        validate(instance, schedule)
        assert is_timely(schedule, instance, report.delta)[0]
        final = [row for row in report.ledger.rows if row.stage == "final"]
        assert final and all(row.passed for row in final)
        assert report.oracle is not None
        assert report.oracle <= report.cost * (1 + 1e-9)
        assert "log_alpha" in report.constants

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_seeded_pipeline_within_ratio(self, seed):
        """Sem o atalho do oracle, a razão em pseudo-custo fica em 1+ε"""
        instance = generate(seed, Shape.UNIFORM, n=3, m=2, release=True)
        schedule, report = eptas_release(instance, 1.0, fallback=False, oracle_limits=OracleLimits.for_release())
        assert report.fallback == "no-pink"
        validate(instance, schedule)
        assert report.oracle is not None
        assert report.oracle <= report.cost * (1 + 1e-9)
        assert report.ratio <= (1 + 1.0) * (1 + 1e-9)

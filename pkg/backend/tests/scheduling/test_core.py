#!/usr/bin/env python3
"""
Test Suite - Core Module

Testes do modelo de dados e dos funcionais de custo:
- potências de (1+δ)
- validação de schedules
- custo, pseudo-custo e timeliness
- formato texto e ledger

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wct_eptas.core import (
    DomainError,
    GeoValue,
    Instance,
    InstanceFormatError,
    Job,
    Machine,
    OrderedSchedule,
    ScheduleError,
    Slot,
    StageLedger,
    TimedSchedule,
    block_gamma,
    cost,
    format_instance,
    format_schedule,
    gamma_lower_bound,
    gamma_sum,
    geo_ceil,
    geo_floor,
    geo_value,
    is_timely,
    natural_order,
    parse_instance,
    parse_schedule,
    pseudo_cost,
    realize,
    to_timed,
    u_cost,
    validate,
)

from .conftest import build_instance


# === POTÊNCIAS ===

class TestGeoPowers:
    """Testes de geo_floor / geo_ceil"""

    def test_exact_power_is_fixed_point(self):
        """Potência exata volta ao mesmo expoente"""
        delta = Fraction(1, 8)
        x = geo_value(5, delta)
        assert geo_floor(x, delta) == 5
        assert geo_ceil(x, delta) == 5

    def test_between_powers(self):
        """Valor entre potências consecutivas"""
        delta = Fraction(1, 4)
        assert geo_floor(Fraction(3, 2), delta) == 1
        assert geo_ceil(Fraction(3, 2), delta) == 2

    def test_nonpositive_rejected(self):
        """Logaritmo de valor não positivo"""
        with pytest.raises(DomainError):
            geo_floor(0, 0.125)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e6))
    def test_floor_ceil_bracket(self, x):
        """(1+δ)^floor ≤ x ≤ (1+δ)^ceil"""
        delta = 0.125
        assert geo_value(geo_floor(x, delta), delta) <= x
        assert geo_value(geo_ceil(x, delta), delta) >= x
        assert geo_ceil(x, delta) - geo_floor(x, delta) in (0, 1)

    def test_geo_value_arithmetic(self):
        """Produto e potência somam expoentes"""
        assert GeoValue(3) * GeoValue(4) == GeoValue(7)
        assert GeoValue(3) / GeoValue(4) == GeoValue(-1)
        assert GeoValue(2) ** 3 == GeoValue(6)


# === DADOS ===

class TestInstance:
    """Testes de Job / Machine / Instance"""

    def test_machines_sorted_by_speed(self):
        """Índice de máquina segue velocidade não-crescente"""
        instance = build_instance([1.0, 3.0, 2.0], [(1.0, 1.0, 0)])
        assert [mc.id for mc in instance.machines] == [2, 3, 1]
        assert instance.machine_index(2) == 1

    @pytest.mark.parametrize("size,weight,release", [(0, 1, 0), (1, 0, 0), (1, 1, -1)])
    def test_invalid_job(self, size, weight, release):
        """Tamanho/peso não positivos e liberação negativa"""
        with pytest.raises(DomainError):
            Job(1, size, weight, release)

    def test_duplicate_ids(self):
        """Ids repetidos"""
        with pytest.raises(DomainError):
            Instance((Job(1, 1, 1), Job(1, 2, 2)), (Machine(1, 1.0),))

    def test_no_machines(self):
        with pytest.raises(DomainError):
            Instance((Job(1, 1, 1),), ())

    def test_natural_order(self):
        """Densidade não-crescente, depois tamanho, depois id"""
        jobs = [Job(1, 2, 2), Job(2, 1, 3), Job(3, 4, 4), Job(4, 2, 2)]
        assert [j.id for j in natural_order(jobs)] == [2, 3, 1, 4]


# === VALIDAÇÃO E CUSTO ===

class TestCost:
    """Testes de validate / cost / funcionais Γ"""

    def test_ordered_cost(self, single_machine_instance):
        """Custo por somas de prefixo"""
        schedule = OrderedSchedule({1: (2, 3, 1)})
        # conclusões 1, 3, 6
        assert cost(single_machine_instance, schedule).total == pytest.approx(2 * 1 + 2 * 3 + 1 * 6)

    def test_timed_matches_ordered(self, two_machine_instance):
        """to_timed preserva o custo"""
        schedule = OrderedSchedule({1: (2, 1), 2: (3, 4)})
        timed = to_timed(two_machine_instance, schedule)
        assert cost(two_machine_instance, timed).total == pytest.approx(cost(two_machine_instance, schedule).total)
        assert timed.machine_jobs(1) == [2, 1]

    def test_missing_job(self, two_machine_instance):
        with pytest.raises(ScheduleError) as info:
            validate(two_machine_instance, OrderedSchedule({1: (1, 2), 2: (3,)}))
        assert info.value.job_id == 4

    def test_duplicate_job(self, two_machine_instance):
        with pytest.raises(ScheduleError):
            validate(two_machine_instance, OrderedSchedule({1: (1, 2, 3), 2: (3, 4)}))

    def test_overlap_detected(self, two_machine_instance):
        """Dois jobs sobrepostos na mesma máquina"""
        slots = {1: Slot(1, 2.0), 2: Slot(1, 2.5), 3: Slot(2, 1.0), 4: Slot(2, 4.0)}
        with pytest.raises(ScheduleError, match="overlap"):
            validate(two_machine_instance, TimedSchedule(slots))

    def test_release_violation(self, release_instance):
        """Início antes da liberação"""
        slots = {1: Slot(1, 1.0), 2: Slot(1, 1.5), 3: Slot(2, 6.0), 4: Slot(2, 8.0)}
        with pytest.raises(ScheduleError, match="release"):
            validate(release_instance, TimedSchedule(slots))

    def test_gamma_lower_bound(self):
        """Γ de uma máquina nunca fica abaixo de φΦ²/(2v)"""
        jobs = [Job(1, 2, 4), Job(2, 1, 1), Job(3, 3, 3)]
        machine = Machine(1, 2.0)
        assert gamma_sum(jobs, machine.speed) >= gamma_lower_bound(jobs, machine)

    def test_block_gamma_matches_jobs(self):
        """Bloco de densidade única equivale à soma dos Γ"""
        jobs = [Job(1, 2, 2), Job(2, 3, 3)]
        assert block_gamma(5, 1, 1.0, 2.0) == pytest.approx(gamma_sum(jobs, 2.0, start=1.0))

    def test_u_cost_between_gamma_and_cost(self):
        jobs = [Job(1, 1, 2), Job(2, 4, 1)]
        full = 2 * 1 + 1 * 5
        assert gamma_sum(jobs, 1.0) <= u_cost(jobs, 2, 1.0) <= full


class TestIntervalFunctionals:
    """Testes de pseudo-custo, timeliness e realize"""

    def test_pseudo_cost_rounds_up(self, single_machine_instance):
        """Conclusão em [(1+δ)^i,(1+δ)^{i+1}) paga (1+δ)^{i+1}"""
        delta = Fraction(1, 2)
        schedule = realize(single_machine_instance, {1: (2, 3, 1)})
        report = pseudo_cost(schedule, single_machine_instance, delta)
        assert report.total >= cost(single_machine_instance, schedule).total
        assert report.total <= (1 + delta) * cost(single_machine_instance, schedule).total

    def test_pseudo_cost_needs_delta(self, single_machine_instance):
        schedule = realize(single_machine_instance, {1: (1, 2, 3)})
        with pytest.raises(DomainError):
            pseudo_cost(schedule, single_machine_instance)

    def test_realize_respects_release_and_timeliness(self, release_instance):
        """Início ≥ max(liberação, δ·p/s)"""
        delta = 0.25
        schedule = realize(release_instance, {1: (1, 2, 4), 2: (3,)}, timely_delta=delta)
        validate(release_instance, schedule)
        assert is_timely(schedule, release_instance, delta) == (True, None)
        assert schedule.start(release_instance, 2) >= 1.5

    def test_untimely_witness(self, single_machine_instance):
        schedule = realize(single_machine_instance, {1: (2, 3, 1)})
        assert is_timely(schedule, single_machine_instance, 0.5) == (False, 2)


# === FORMATO TEXTO ===

class TestTextFormat:
    """Testes de parse/format"""

    def test_instance_text(self, release_instance):
        text = format_instance(release_instance)
        again = parse_instance(text)
        assert again == release_instance

    def test_comments_ignored(self):
        text = "# comentário\n1 1 0\nmachine 1 2.0  # rápida\njob 7 3 1 0\n"
        instance = parse_instance(text)
        assert instance.job(7).size == 3.0

    def test_exact_parse(self):
        instance = parse_instance("1 1 0\nmachine 1 1/3\njob 1 2 1 0\n", exact=True)
        assert instance.speed(1) == Fraction(1, 3)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("", 1),
            ("1 1\n", 1),
            ("1 1 0\nmachine 1 x\njob 1 1 1 0\n", 2),
            ("1 1 0\nmachine 1 1\njob 1 -1 1 0\n", 3),
            ("1 2 0\nmachine 1 1\njob 1 1 1 0\n", 3),
            ("1 1 0\nmachine 1 1\ntask 1 1 1 0\n", 3),
        ],
    )
    def test_malformed(self, text, line):
        """Erro aponta a linha"""
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(text)
        assert info.value.line_number == line

    def test_schedule_text(self, two_machine_instance):
        timed = to_timed(two_machine_instance, OrderedSchedule({1: (1, 2), 2: (3, 4)}))
        assert parse_schedule(format_schedule(timed)) == timed

    def test_schedule_duplicate_line(self):
        with pytest.raises(InstanceFormatError):
            parse_schedule("job 1 machine 1 completion 1.0\njob 1 machine 2 completion 2.0\n")


# === LEDGER ===

class TestStageLedger:
    """Testes do ledger de auditoria"""

    def test_audit_records_slack(self):
        ledger = StageLedger("abc")
        row = ledger.audit("round", "a <= b", 1.0, 3.0)
        assert row.passed and row.slack == pytest.approx(2.0)
        assert ledger.all_passed

    def test_failed_audit(self):
        ledger = StageLedger()
        ledger.audit("milp", "lp <= opt", 5.0, 4.0)
        ledger.record("milp", cost=3.0)
        assert not ledger.all_passed
        assert [row.check for row in ledger.failures()] == ["lp <= opt"]

    def test_csv(self):
        ledger = StageLedger("h")
        ledger.record("combine", zeta=2, cost=1.5)
        buffer = io.StringIO()
        ledger.write_csv(buffer)
        header, row = buffer.getvalue().strip().splitlines()
        assert header.startswith("stage,instance_hash")
        assert row.startswith("combine,h")

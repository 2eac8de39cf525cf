#!/usr/bin/env python3
"""
Test Suite - Timeline Module

Testes de listas de intervalos, time stretching, classificação de jobs,
job shifting e truncamento de horizonte.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wct_eptas.core import (
    DomainError,
    Instance,
    Job,
    Machine,
    Slot,
    TimedSchedule,
    geo_value,
    is_timely,
    pseudo_cost,
    realize,
    validate,
)
from wct_eptas.rounding import ParamPack, round_release
from wct_eptas.timeline import (
    IntervalEntry,
    IntervalKey,
    IntervalList,
    JobClass,
    ListConditionError,
    check_list_conditions,
    classify_job,
    interval_of,
    is_organized,
    job_shift,
    list_from_schedule,
    pack_release_batch,
    schedule_from_list,
    shift_schedule,
    stretched_instance,
    time_augment,
    time_stretch,
    truncate_horizon,
    truncation_horizon,
)

from .conftest import build_instance

HALF = Fraction(1, 2)


@pytest.fixture
def unit_pair() -> Instance:
    """Dois jobs unitários numa máquina de velocidade 1, δ = 1/2"""
    return Instance((Job(1, 1, 1), Job(2, 1, 1)), (Machine(1, 1),), True, HALF)


@pytest.fixture
def unit_pair_schedule(unit_pair) -> TimedSchedule:
    # j1 em [0.5, 1.5), j2 em [1.5, 2.5)
    return realize(unit_pair, {1: (1, 2)}, timely_delta=HALF)


class TestIntervals:
    """Testes de interval_of / IntervalKey"""

    def test_exact_power(self):
        assert interval_of(geo_value(3, HALF), HALF) == 3

    def test_near_boundary_moves_up(self):
        """Um instante colado à borda pertence ao intervalo seguinte"""
        assert interval_of(1.5 - 1e-12, HALF) == 1

    def test_key_geometry(self):
        key = IntervalKey(2, 1, 2, HALF)
        assert key.start == Fraction(9, 4)
        assert key.end == Fraction(27, 8)
        assert key.length == 2 * HALF * Fraction(9, 4)


class TestIntervalLists:
    """Testes de listas de intervalos e das quatro condições"""

    def test_list_from_schedule(self, unit_pair, unit_pair_schedule):
        lst = list_from_schedule(unit_pair, unit_pair_schedule)
        assert lst.entries[1] == IntervalEntry(1, -2, 1)
        assert lst.entries[2] == IntervalEntry(1, 1, 2)
        assert lst.pseudo_cost(unit_pair) == pseudo_cost(unit_pair_schedule, unit_pair).total

    def test_schedule_from_list_keeps_pseudo_cost(self, unit_pair, unit_pair_schedule):
        """A varredura reconstrói o schedule com o mesmo pseudo-custo"""
        lst = list_from_schedule(unit_pair, unit_pair_schedule)
        rebuilt = schedule_from_list(lst, unit_pair)
        validate(unit_pair, rebuilt)
        assert pseudo_cost(rebuilt, unit_pair).total == lst.pseudo_cost(unit_pair)

    def test_zero_start_rejected(self, unit_pair):
        """Início em 0 só aparece em schedules não timely; o erro diz isso"""
        schedule = realize(unit_pair, {1: (1, 2)})
        with pytest.raises(DomainError, match="timely"):
            list_from_schedule(unit_pair, schedule)

    def test_overfull_interval(self, unit_pair):
        """Condição 2: dois jobs unitários não cabem em [1, 1.5)"""
        lst = IntervalList({1: IntervalEntry(1, 0, 0), 2: IntervalEntry(1, 0, 0)}, HALF)
        with pytest.raises(ListConditionError) as info:
            check_list_conditions(lst, unit_pair)
        assert info.value.condition == 2

    def test_two_crossing_jobs(self, unit_pair):
        """Condição 4: no máximo um job sai de cada intervalo"""
        lst = IntervalList({1: IntervalEntry(1, 0, 3), 2: IntervalEntry(1, 0, 3)}, HALF)
        with pytest.raises(ListConditionError) as info:
            check_list_conditions(lst, unit_pair)
        assert info.value.condition == 4

    def test_event_under_spanning_job(self, unit_pair):
        """Condição 3: nenhum evento dentro de um job que atravessa intervalos"""
        lst = IntervalList({1: IntervalEntry(1, 0, 4), 2: IntervalEntry(1, 2, 2)}, HALF)
        with pytest.raises(ListConditionError) as info:
            check_list_conditions(lst, unit_pair)
        assert info.value.condition == 3

    def test_shift_scales_pseudo_cost(self, unit_pair, unit_pair_schedule):
        lst = list_from_schedule(unit_pair, unit_pair_schedule)
        assert shift_schedule(lst).pseudo_cost(unit_pair) == (1 + HALF) * lst.pseudo_cost(unit_pair)


class TestAugmentAndStretch:
    """Testes de time augmentation e time stretching"""

    def test_time_augment(self, unit_pair, unit_pair_schedule):
        augmented = time_augment(unit_pair, unit_pair_schedule, 2)
        assert augmented.slots[2].completion == 5.0
        validate(unit_pair, augmented)
        with pytest.raises(DomainError):
            time_augment(unit_pair, unit_pair_schedule, 1)

    def test_stretched_instance(self, unit_pair):
        stretched = stretched_instance(unit_pair)
        assert all(job.size == Fraction(3, 2) for job in stretched.jobs)

    def test_time_stretch_valid(self, unit_pair, unit_pair_schedule):
        """O schedule esticado é válido, timely e os gaps ficam fora dos períodos reservados"""
        stretched = time_stretch(unit_pair, unit_pair_schedule)
        timed = stretched.timed()
        validate(unit_pair, timed)
        assert is_timely(timed, unit_pair)[0]
        for (machine, i) in stretched.gaps:
            assert not stretched.covered(machine, i)
        assert any(row.stage == "time_stretch" for row in stretched.ledger.rows)

    def test_time_stretch_needs_timely(self, unit_pair):
        with pytest.raises(DomainError):
            time_stretch(unit_pair, TimedSchedule({1: Slot(1, 1.0), 2: Slot(1, 2.0)}))


class TestClassification:
    """Testes de classify_job e is_organized"""

    @pytest.mark.parametrize(
        "size,expected",
        [
            (Fraction(1, 4096), JobClass.SMALL),
            (Fraction(1, 2), JobClass.MEDIUM),
            (2, JobClass.LARGE),
            (3, JobClass.HUGE),
        ],
    )
    def test_classes(self, size, expected):
        key = IntervalKey(0, 1, 1, HALF)
        assert classify_job(size, key) is expected

    def test_big_classes(self):
        assert JobClass.MEDIUM.is_big and JobClass.LARGE.is_big
        assert not JobClass.SMALL.is_big and not JobClass.HUGE.is_big

    def test_untimely_is_not_organized(self, unit_pair):
        schedule = TimedSchedule({1: Slot(1, 1.0), 2: Slot(1, 2.0)})
        organized, witness = is_organized(unit_pair, schedule)
        assert not organized
        assert witness.condition == "timely" and witness.first == 1


class TestJobShift:
    """Testes de job shifting, lotes e horizonte"""

    @pytest.fixture
    def rounded(self, release_instance) -> Instance:
        return round_release(release_instance, ParamPack.build(0.5, release=True))

    def test_releases_only_move_later(self, rounded):
        shifted = job_shift(rounded)
        for job in rounded.jobs:
            assert shifted.instance.job(job.id).release_exp >= job.release_exp
        assert set(shifted.selected_for) == {j.id for j in rounded.jobs}

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.sampled_from([0.01, 0.2, 1.0, 1.5, 3.0, 8.0]),
                st.sampled_from([1.0, 2.0]),
                st.sampled_from([0.0, 0.5, 1.0, 1.2, 4.0]),
            ),
            min_size=1,
            max_size=8,
        ),
        st.lists(st.sampled_from([1.0, 2.0, 3.0]), min_size=1, max_size=3),
    )
    def test_shift_is_idempotent(self, jobs, speeds):
        """Aplicar job_shift em Ã não move mais nenhuma liberação"""
        rounded = round_release(build_instance(speeds, jobs, True), ParamPack.build(0.5, release=True))
        tilde = job_shift(rounded).instance
        again = job_shift(tilde).instance
        assert {j.id: j.release_exp for j in again.jobs} == {j.id: j.release_exp for j in tilde.jobs}

    def test_needs_rounded_instance(self, release_instance):
        with pytest.raises(DomainError):
            job_shift(release_instance, 0.125)

    def test_pack_batch(self, rounded):
        shift = job_shift(rounded)
        tilde = shift.instance
        release_exp = min(j.release_exp for j in tilde.jobs)
        start = geo_value(release_exp, tilde.delta)
        batch = pack_release_batch(tilde, shift, release_exp, start)
        assert set(batch.slots) == {j.id for j in tilde.jobs if j.release_exp == release_exp}
        with pytest.raises(DomainError):
            pack_release_batch(tilde, shift, release_exp, start / 2)

    def test_truncation(self, rounded):
        shift = job_shift(rounded)
        tilde = shift.instance
        delta = tilde.delta
        horizon_exp = truncation_horizon(tilde.max_release, 4, delta)
        assert geo_value(horizon_exp, delta) > 4 * tilde.max_release / delta ** 24
        sequences = {mc.id: () for mc in tilde.machines}
        sequences[tilde.machines[0].id] = tuple(j.id for j in tilde.jobs)
        schedule = realize(tilde, sequences)
        assert truncate_horizon(tilde, schedule, shift, horizon_exp) is schedule

#!/usr/bin/env python3
"""
Test Suite - Oracle Module

Os solvers exatos são a verdade de todas as medições de razão, então são
conferidos contra uma enumeração ingênua de atribuições e ordens.

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wct_eptas.core import (
    UnsupportedInstanceError,
    cost,
    is_timely,
    pseudo_cost,
    realize,
    validate,
)
from wct_eptas.oracle import (
    ObjectiveKind,
    OracleLimitError,
    OracleLimits,
    opt_no_release,
    opt_release,
    smith_single_machine,
)

from .conftest import build_instance


def brute_force(instance, timely_delta=None, objective=cost):
    """Menor valor sobre todas as atribuições e ordens, início mais cedo possível"""
    machine_ids = [mc.id for mc in instance.machines]
    best = None
    for perm in itertools.permutations(j.id for j in instance.jobs):
        for assignment in itertools.product(machine_ids, repeat=len(perm)):
            sequences = {mid: [] for mid in machine_ids}
            for jid, mid in zip(perm, assignment):
                sequences[mid].append(jid)
            schedule = realize(instance, sequences, timely_delta=timely_delta)
            value = objective(instance, schedule)
            if best is None or value < best:
                best = value
    return best


def plain_cost(instance, schedule):
    return float(cost(instance, schedule).total)


sizes = st.floats(min_value=0.5, max_value=8.0).map(lambda x: round(x, 2))
small_jobs = st.lists(st.tuples(sizes, sizes, st.just(0.0)), min_size=1, max_size=4)
release_jobs = st.lists(
    st.tuples(sizes, sizes, st.floats(min_value=0.0, max_value=6.0).map(lambda x: round(x, 2))),
    min_size=1,
    max_size=4,
)
speeds = st.lists(st.sampled_from([1.0, 1.5, 2.0, 3.0]), min_size=1, max_size=2)


class TestNoReleaseOracle:
    """Testes de smith_single_machine e opt_no_release"""

    def test_smith_matches_search(self, single_machine_instance):
        _, smith = smith_single_machine(single_machine_instance.jobs, 1.0)
        schedule, value = opt_no_release(single_machine_instance)
        assert value == pytest.approx(smith)
        assert schedule.sequences[1] == (2, 3, 1)

    def test_smith_rejects_release(self, release_instance):
        with pytest.raises(UnsupportedInstanceError):
            smith_single_machine(release_instance.jobs, 1.0)

    @settings(max_examples=25, deadline=None)
    @given(small_jobs, speeds)
    def test_matches_brute_force(self, jobs, machine_speeds):
        """Poda Γ não perde o ótimo"""
        instance = build_instance(machine_speeds, jobs)
        schedule, value = opt_no_release(instance)
        validate(instance, schedule)
        assert float(cost(instance, schedule).total) == pytest.approx(float(value))
        assert float(value) == pytest.approx(brute_force(instance, objective=plain_cost))

    def test_prune_toggle(self, two_machine_instance):
        _, pruned = opt_no_release(two_machine_instance, OracleLimits(prune=True))
        _, full = opt_no_release(two_machine_instance, OracleLimits(prune=False))
        assert pruned == pytest.approx(full)

    def test_limits(self, two_machine_instance):
        with pytest.raises(OracleLimitError) as info:
            opt_no_release(two_machine_instance, OracleLimits(max_jobs=3))
        assert info.value.limit == 3
        with pytest.raises(OracleLimitError):
            opt_no_release(two_machine_instance, OracleLimits(max_machines=1))

    def test_rejects_release(self, release_instance):
        with pytest.raises(UnsupportedInstanceError):
            opt_no_release(release_instance)

    def test_release_limits_are_tighter(self):
        assert OracleLimits.for_release().max_jobs == 7
        assert OracleLimits.for_release(max_jobs=5).max_jobs == 5


class TestReleaseOracle:
    """Testes de opt_release"""

    @settings(max_examples=20, deadline=None)
    @given(release_jobs, speeds)
    def test_cost_matches_brute_force(self, jobs, machine_speeds):
        instance = build_instance(machine_speeds, jobs, has_release=True)
        schedule, value = opt_release(instance)
        validate(instance, schedule)
        assert float(value) == pytest.approx(brute_force(instance, objective=plain_cost))

    def test_agrees_without_release(self, two_machine_instance):
        """Sem liberações os dois oracles coincidem"""
        _, without = opt_no_release(two_machine_instance)
        _, timed = opt_release(two_machine_instance)
        assert float(timed) == pytest.approx(float(without))

    def test_timely_pseudo_cost(self, release_instance):
        """Busca timely em pseudo-custo devolve um schedule timely com o valor informado"""
        delta = 0.125
        limits = OracleLimits.for_release(objective=ObjectiveKind.PSEUDO_COST, timely_only=True, delta=delta)
        schedule, value = opt_release(release_instance, limits)
        validate(release_instance, schedule)
        assert is_timely(schedule, release_instance, delta) == (True, None)
        assert float(pseudo_cost(schedule, release_instance, delta).total) == pytest.approx(float(value))

        def timely_pseudo(instance, sched):
            return float(pseudo_cost(sched, instance, delta).total)

        assert float(value) == pytest.approx(brute_force(release_instance, delta, timely_pseudo))

    def test_pseudo_cost_needs_delta(self, release_instance):
        with pytest.raises(UnsupportedInstanceError):
            opt_release(release_instance, objective=ObjectiveKind.PSEUDO_COST)

    def test_empty_instance(self):
        instance = build_instance([1.0], [], has_release=True)
        schedule, value = opt_release(instance)
        assert schedule.slots == {} and value == 0

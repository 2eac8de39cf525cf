"""
Fixtures compartilhadas dos testes de escalonamento

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from typing import Iterable, Tuple

import pytest

from wct_eptas.core import Instance, Job, Machine


def build_instance(
    speeds: Iterable[float],
    jobs: Iterable[Tuple[float, float, float]],
    has_release: bool = False,
) -> Instance:
    """Máquinas numeradas a partir de 1; jobs como (tamanho, peso, liberação)"""
    machines = tuple(Machine(idx + 1, s) for idx, s in enumerate(speeds))
    return Instance(
        tuple(Job(idx + 1, p, w, r) for idx, (p, w, r) in enumerate(jobs)),
        machines,
        has_release,
    )


@pytest.fixture
def two_machine_instance() -> Instance:
    return build_instance([2.0, 1.0], [(4.0, 2.0, 0), (2.0, 3.0, 0), (1.0, 1.0, 0), (3.0, 1.5, 0)])


@pytest.fixture
def single_machine_instance() -> Instance:
    return build_instance([1.0], [(3.0, 1.0, 0), (1.0, 2.0, 0), (2.0, 2.0, 0)])


@pytest.fixture
def release_instance() -> Instance:
    return build_instance(
        [2.0, 1.0],
        [(2.0, 1.0, 0.0), (1.0, 3.0, 1.5), (3.0, 2.0, 0.5), (1.5, 1.0, 4.0)],
        has_release=True,
    )

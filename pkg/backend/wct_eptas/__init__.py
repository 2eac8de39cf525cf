"""
WCT EPTAS - Weighted Completion Time on Related Machines

Esquemas de aproximação eficientes (EPTAS) para a soma ponderada dos
tempos de conclusão em máquinas relacionadas:
- eptas_no_release: sem datas de liberação (bandas de densidade + MILP)
- eptas_release: com datas de liberação, avaliado em pseudo-custo
- opt_no_release / opt_release: oracles exatos para instâncias pequenas

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from .core import (
    Instance,
    Job,
    Machine,
    OrderedSchedule,
    TimedSchedule,
    SchedulingError,
    StageLedger,
    cost,
    pseudo_cost,
    parse_instance,
    parse_schedule,
    validate,
)
from .rounding import ParamPack, Profile
from .oracle import OracleLimits, opt_no_release, opt_release
from .bands_eptas import eptas_no_release
from .release_eptas import eptas_release

__all__ = [
    'Instance',
    'Job',
    'Machine',
    'OrderedSchedule',
    'TimedSchedule',
    'SchedulingError',
    'StageLedger',
    'cost',
    'pseudo_cost',
    'parse_instance',
    'parse_schedule',
    'validate',
    'ParamPack',
    'Profile',
    'OracleLimits',
    'opt_no_release',
    'opt_release',
    'eptas_no_release',
    'eptas_release',
]

__version__ = '1.0.0'

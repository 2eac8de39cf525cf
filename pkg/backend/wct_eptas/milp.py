#!/usr/bin/env python3
"""
MILP - Linear Programming and Branch-and-Bound

Solver autocontido para os programas de configuração:
- simplex primal de duas fases sobre tableau denso (numpy)
- regra de Dantzig com fallback para Bland em ciclos degenerados
- branch-and-bound best-first, ramificando na variável mais fracionária

Author: MatVerse Team
Version: 1.0.0
Date: 2025-12-04
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
FEASIBILITY_TOL = 1e-7
INTEGRALITY_TOL = 1e-6
DEGENERATE_SWITCH = 50


class Sense(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float = 0.0
    upper: float = math.inf
    integral: bool = False


@dataclass(frozen=True)
class Constraint:
    coefficients: Mapping[int, float]
    sense: Sense
    rhs: float
    name: str


Key = Union[int, str]


class LinearModel:
    """Programa linear misto, objetivo sempre de minimização"""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: List[Variable] = []
        self.constraints: List[Constraint] = []
        self.objective: Dict[int, float] = {}
        self._index: Dict[str, int] = {}

    def add_variable(self, name: str, lower: float = 0.0, upper: float = math.inf, integral: bool = False) -> int:
        if name in self._index:
            raise ValueError(f"variable {name!r} already declared")
        if not math.isfinite(lower):
            raise ValueError(f"variable {name!r}: lower bound must be finite")
        if upper < lower:
            raise ValueError(f"variable {name!r}: upper bound {upper} below lower bound {lower}")
        self._index[name] = len(self.variables)
        self.variables.append(Variable(name, float(lower), float(upper), integral))
        return self._index[name]

    def index(self, key: Key) -> int:
        if isinstance(key, str):
            if key not in self._index:
                raise KeyError(f"undeclared variable {key!r}")
            return self._index[key]
        if not 0 <= key < len(self.variables):
            raise KeyError(f"undeclared variable index {key}")
        return key

    def _row(self, coefficients: Mapping[Key, float]) -> Dict[int, float]:
        row: Dict[int, float] = {}
        for key, value in coefficients.items():
            if value:
                idx = self.index(key)
                row[idx] = row.get(idx, 0.0) + float(value)
        return row

    def add_constraint(
        self, coefficients: Mapping[Key, float], sense: Sense, rhs: float, name: Optional[str] = None
    ) -> int:
        name = name or f"c{len(self.constraints)}"
        self.constraints.append(Constraint(self._row(coefficients), Sense(sense), float(rhs), name))
        return len(self.constraints) - 1

    def set_objective(self, coefficients: Mapping[Key, float]) -> None:
        self.objective = self._row(coefficients)

    @property
    def integral_indices(self) -> List[int]:
        return [i for i, var in enumerate(self.variables) if var.integral]

    def evaluate(self, values: Sequence[float]) -> float:
        return float(sum(c * values[i] for i, c in self.objective.items()))

    def violations(self, values: Sequence[float], tol: float = FEASIBILITY_TOL) -> List[Tuple[str, float]]:
        """Restrições e limites violados com o resíduo"""
        out = []
        for var, value in zip(self.variables, values):
            scale = max(1.0, abs(value))
            if value < var.lower - tol * scale or value > var.upper + tol * scale:
                out.append((f"bounds:{var.name}", float(value)))
        for con in self.constraints:
            lhs = sum(c * values[i] for i, c in con.coefficients.items())
            scale = max(1.0, abs(con.rhs), max((abs(c * values[i]) for i, c in con.coefficients.items()), default=0.0))
            residual = lhs - con.rhs
            if (
                (con.sense is Sense.LE and residual > tol * scale)
                or (con.sense is Sense.GE and residual < -tol * scale)
                or (con.sense is Sense.EQ and abs(residual) > tol * scale)
            ):
                out.append((con.name, float(residual)))
        return out

    def is_feasible(self, values: Sequence[float], tol: float = FEASIBILITY_TOL) -> bool:
        return not self.violations(values, tol)

    def dump(self) -> str:
        """Formato texto, uma restrição por linha"""

        def expr(row: Mapping[int, float]) -> str:
            if not row:
                return "0"
            return " + ".join(f"{c:g} {self.variables[i].name}" for i, c in sorted(row.items()))

        lines = [f"\\ {self.name}", f"minimize: {expr(self.objective)}"]
        lines += [f"{con.name}: {expr(con.coefficients)} {con.sense.value} {con.rhs:g}" for con in self.constraints]
        for var in self.variables:
            kind = " integer" if var.integral else ""
            lines.append(f"bound {var.name}: {var.lower:g} <= {var.name} <= {var.upper:g}{kind}")
        return "\n".join(lines) + "\n"


@dataclass
class MilpSolution:
    status: Status
    values: Dict[str, float] = field(default_factory=dict)
    objective: Optional[float] = None
    vector: Optional[np.ndarray] = None
    nodes: int = 0
    diagnostics: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def value(self, name: str) -> float:
        return self.values.get(name, 0.0)


@dataclass(frozen=True)
class MilpBudget:
    max_nodes: int = 20000
    time_limit: float = 120.0
    max_iterations: int = 50000


# === SIMPLEX ===

class _Tableau:
    """Forma canônica B⁻¹A x = B⁻¹b sobre variáveis deslocadas x′ = x − lower ≥ 0"""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: List[int]):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, row: int, col: int) -> None:
        p = self.A[row, col]
        pivot_row = self.A[row] / p
        pivot_rhs = self.b[row] / p
        factors = self.A[:, col].copy()
        self.A -= np.outer(factors, pivot_row)
        self.b -= factors * pivot_rhs
        self.A[row] = pivot_row
        self.b[row] = pivot_rhs
        self.b[np.abs(self.b) < PIVOT_TOL] = 0.0
        self.basis[row] = col

    def drop_row(self, row: int) -> None:
        self.A = np.delete(self.A, row, axis=0)
        self.b = np.delete(self.b, row)
        del self.basis[row]


def _run_simplex(tab: _Tableau, costs: np.ndarray, allowed: np.ndarray, max_iterations: int) -> Tuple[Status, int]:
    bland = False
    degenerate = 0
    for iteration in range(max_iterations):
        reduced = costs - costs[tab.basis] @ tab.A
        candidates = np.where(allowed & (reduced < -COST_TOL))[0]
        if candidates.size == 0:
            return Status.OPTIMAL, iteration
        entering = int(candidates[0]) if bland else int(candidates[np.argmin(reduced[candidates])])

        column = tab.A[:, entering]
        rows = np.where(column > PIVOT_TOL)[0]
        if rows.size == 0:
            return Status.UNBOUNDED, iteration
        ratios = tab.b[rows] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        leaving = int(min(tied, key=lambda r: tab.basis[r]))

        if best <= PIVOT_TOL:
            degenerate += 1
            if degenerate > DEGENERATE_SWITCH and not bland:
                logger.debug("simplex: degeneração persistente, trocando para regra de Bland")
                bland = True
        else:
            degenerate = 0
        tab.pivot(leaving, entering)
    return Status.BUDGET_EXCEEDED, max_iterations


def solve_lp(
    model: LinearModel,
    bounds: Optional[Sequence[Tuple[float, float]]] = None,
    max_iterations: int = MilpBudget.max_iterations,
) -> MilpSolution:
    """Relaxação linear do modelo (integralidade ignorada)"""
    n = len(model.variables)
    lower = np.array([b[0] for b in bounds] if bounds else [v.lower for v in model.variables], dtype=float)
    upper = np.array([b[1] for b in bounds] if bounds else [v.upper for v in model.variables], dtype=float)
    if np.any(upper < lower - INTEGRALITY_TOL):
        return MilpSolution(Status.INFEASIBLE, diagnostics="empty variable box")
    upper = np.maximum(upper, lower)

    rows: List[Tuple[np.ndarray, Sense, float]] = []
    for con in model.constraints:
        coef = np.zeros(n)
        for i, c in con.coefficients.items():
            coef[i] = c
        rows.append((coef, con.sense, con.rhs - float(coef @ lower)))
    for i in range(n):
        if math.isfinite(upper[i]):
            coef = np.zeros(n)
            coef[i] = 1.0
            rows.append((coef, Sense.LE, upper[i] - lower[i]))

    m = len(rows)
    slack_count = sum(1 for _, sense, _ in rows if sense is not Sense.EQ)
    total = n + slack_count + m
    A = np.zeros((m, total))
    b = np.zeros(m)
    basis: List[int] = []
    artificial = np.zeros(total, dtype=bool)
    slack_col = n
    for r, (coef, sense, rhs) in enumerate(rows):
        A[r, :n] = coef
        own_slack = None
        if sense is not Sense.EQ:
            A[r, slack_col] = 1.0 if sense is Sense.LE else -1.0
            own_slack = slack_col
            slack_col += 1
        b[r] = rhs
        if rhs < 0:
            A[r] *= -1.0
            b[r] = -rhs
        art = n + slack_count + r
        if own_slack is not None and A[r, own_slack] > 0:
            basis.append(own_slack)
        else:
            A[r, art] = 1.0
            basis.append(art)
        artificial[art] = True

    tab = _Tableau(A, b, basis)
    used_artificial = [c for c in basis if artificial[c]]
    iterations = 0
    if used_artificial:
        phase1 = np.zeros(total)
        phase1[used_artificial] = 1.0
        allowed = np.ones(total, dtype=bool)
        allowed[artificial] = False
        allowed[used_artificial] = True
        status, iterations = _run_simplex(tab, phase1, allowed, max_iterations)
        if status is Status.BUDGET_EXCEEDED:
            return MilpSolution(status, diagnostics=f"phase 1 iteration limit ({iterations})")
        infeasibility = float(phase1[tab.basis] @ tab.b)
        if infeasibility > FEASIBILITY_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return MilpSolution(Status.INFEASIBLE, diagnostics=f"phase 1 residual {infeasibility:.3g}")
        row = 0
        while row < len(tab.basis):
            if artificial[tab.basis[row]]:
                candidates = np.where((~artificial) & (np.abs(tab.A[row]) > PIVOT_TOL))[0]
                if candidates.size:
                    tab.pivot(row, int(candidates[0]))
                else:
                    tab.drop_row(row)
                    continue
            row += 1

    phase2 = np.zeros(total)
    for i, c in model.objective.items():
        phase2[i] = c
    allowed = ~artificial
    status, more = _run_simplex(tab, phase2, allowed, max_iterations - iterations)
    if status is not Status.OPTIMAL:
        return MilpSolution(status, diagnostics=f"phase 2 stopped after {iterations + more} iterations")

    shifted = np.zeros(total)
    shifted[tab.basis] = tab.b
    x = lower + shifted[:n]
    residuals = model.violations(x) if bounds is None else _violations_with_bounds(model, x, lower, upper)
    if residuals:
        name, value = residuals[0]
        return MilpSolution(Status.BUDGET_EXCEEDED, diagnostics=f"numeric failure: residual {value:.3g} on {name}")
    return MilpSolution(
        Status.OPTIMAL,
        values={var.name: float(x[i]) for i, var in enumerate(model.variables)},
        objective=model.evaluate(x),
        vector=x,
        diagnostics=f"{iterations + more} pivots",
    )


def _violations_with_bounds(model: LinearModel, x: np.ndarray, lower: np.ndarray, upper: np.ndarray):
    out = [v for v in model.violations(x) if not v[0].startswith("bounds:")]
    for i, var in enumerate(model.variables):
        scale = max(1.0, abs(x[i]))
        if x[i] < lower[i] - FEASIBILITY_TOL * scale or x[i] > upper[i] + FEASIBILITY_TOL * scale:
            out.append((f"bounds:{var.name}", float(x[i])))
    return out


# === BRANCH-AND-BOUND ===

def _most_fractional(x: np.ndarray, integral: Sequence[int]) -> Optional[int]:
    best, best_gap = None, INTEGRALITY_TOL
    for i in integral:
        frac = x[i] - math.floor(x[i])
        gap = min(frac, 1.0 - frac)
        if gap > best_gap + 1e-12:
            best, best_gap = i, gap
    return best


def solve_milp(model: LinearModel, budget: MilpBudget = MilpBudget()) -> MilpSolution:
    """Branch-and-bound best-first sobre a relaxação linear"""
    integral = model.integral_indices
    root = solve_lp(model, max_iterations=budget.max_iterations)
    if not integral or root.status is not Status.OPTIMAL:
        root.nodes = 1
        return root

    started = time.perf_counter()
    counter = itertools.count()
    root_bounds = [(v.lower, v.upper) for v in model.variables]
    heap = [(root.objective, next(counter), root_bounds, root.vector)]
    incumbent: Optional[np.ndarray] = None
    best = math.inf
    nodes = 0
    failed = 0

    while heap:
        bound, _, node_bounds, x = heapq.heappop(heap)
        if bound >= best - COST_TOL * max(1.0, abs(best)):
            continue
        nodes += 1
        if nodes > budget.max_nodes or time.perf_counter() - started > budget.time_limit:
            logger.warning(f"branch-and-bound: orçamento excedido após {nodes} nós")
            return _finish(model, incumbent, Status.BUDGET_EXCEEDED, nodes, "node/time budget exceeded")

        branch = _most_fractional(x, integral)
        if branch is None:
            snapped = x.copy()
            for i in integral:
                snapped[i] = round(snapped[i])
            value = model.evaluate(snapped)
            if model.is_feasible(snapped) and value < best:
                best, incumbent = value, snapped
                logger.debug(f"branch-and-bound: incumbente {value:.6g} no nó {nodes}")
            continue

        lo, hi = node_bounds[branch]
        for child_lo, child_hi in ((lo, math.floor(x[branch])), (math.ceil(x[branch]), hi)):
            if child_hi < child_lo:
                continue
            child_bounds = list(node_bounds)
            child_bounds[branch] = (float(child_lo), float(child_hi))
            child = solve_lp(model, child_bounds, budget.max_iterations)
            if child.status not in (Status.OPTIMAL, Status.INFEASIBLE):
                failed += 1
                logger.warning(f"branch-and-bound: relaxação do filho terminou em {child.status.value}")
                continue
            if child.status is Status.OPTIMAL and child.objective < best - COST_TOL * max(1.0, abs(best)):
                heapq.heappush(heap, (child.objective, next(counter), child_bounds, child.vector))

    if failed:
        return _finish(model, incumbent, Status.BUDGET_EXCEEDED, nodes, f"{failed} child relaxations failed")
    status = Status.OPTIMAL if incumbent is not None else Status.INFEASIBLE
    return _finish(model, incumbent, status, nodes, "tree exhausted")


def _finish(model: LinearModel, x: Optional[np.ndarray], status: Status, nodes: int, note: str) -> MilpSolution:
    if x is None:
        return MilpSolution(status, nodes=nodes, diagnostics=note)
    return MilpSolution(
        status,
        values={var.name: float(x[i]) for i, var in enumerate(model.variables)},
        objective=model.evaluate(x),
        vector=x,
        nodes=nodes,
        diagnostics=note,
    )

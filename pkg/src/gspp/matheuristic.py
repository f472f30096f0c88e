"""Bound-ranked variable selection followed by an exact solve of the reduced model.

Every assignment is scored by its probe bound (its cost plus the pair-graph
bound of the rest with it fixed).  The pool keeps the best-scored fraction
``sigma`` of all assignments, moving whole groups of equal score at once,
then tops up each task to at least ``mu`` assignments.  The reduced model is
solved by branch-and-bound and the answer is mapped back to original ids.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from .core import INF, Instance, Solution, evaluate
from .errors import ContractError, InfeasibleError
from .exact import FEASIBLE_TIMEOUT, INFEASIBLE, NO_INCUMBENT_TIMEOUT, OPTIMAL, branch_and_bound
from .relaxation import lb2, probe_all


@dataclass(frozen=True)
class RankingParams:
    sigma: float = 0.1
    mu: int = 2000
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.sigma <= 1.0:
            raise ContractError(f"sigma must lie in [0, 1], got {self.sigma}")
        if self.mu < 0 or int(self.mu) != self.mu:
            raise ContractError(f"mu must be a nonnegative integer, got {self.mu}")


@dataclass
class RankedPool:
    delta: dict[int, int | float]
    selected: list[int]
    trace: list[tuple[str, int, int | float]] = field(default_factory=list)  # (phase, id, delta)


def rank_variables(inst: Instance, *, engine: str = "auto") -> dict[int, int | float]:
    """Probe bound of every assignment; INF marks provably unusable ones."""
    return dict(enumerate(probe_all(inst, engine=engine)))


def select_variables(inst: Instance, delta: Mapping[int, int | float], params: RankingParams) -> RankedPool:
    missing = [k for k in range(inst.n_assignments) if k not in delta]
    if missing:
        raise ContractError(f"no score for assignments {missing[:5]}")
    A = inst.assignments
    ranked = sorted(
        (k for k in range(inst.n_assignments) if delta[k] != INF),
        key=lambda k: (delta[k], A[k].task, k),
    )
    total = inst.n_assignments
    chosen: set[int] = set()
    order: list[int] = []
    trace: list[tuple[str, int, int | float]] = []
    pos = 0
    while total and len(chosen) / total < params.sigma and pos < len(ranked):
        level = delta[ranked[pos]]
        while pos < len(ranked) and delta[ranked[pos]] == level:
            k = ranked[pos]
            chosen.add(k)
            order.append(k)
            trace.append(("sigma", k, level))
            pos += 1
    if params.mu:
        per_task: list[list[int]] = [[] for _ in range(inst.n_tasks)]
        for k in ranked[pos:]:
            per_task[A[k].task].append(k)
        have = [0] * inst.n_tasks
        for k in chosen:
            have[A[k].task] += 1
        for t in range(inst.n_tasks):
            for k in per_task[t]:
                if have[t] >= params.mu:
                    break
                chosen.add(k)
                order.append(k)
                trace.append(("mu", k, delta[k]))
                have[t] += 1
    return RankedPool(dict(delta), order, trace)


@dataclass
class MatheuristicResult:
    status: str  # a SolveResult status, or "reduced-infeasible"
    solution: Solution | None  # in the original instance's ids
    ub: int | None
    lb2: int | float | None
    gap_vs_lb2: float | None
    kept_fraction: float
    pool: RankedPool
    timings: dict[str, float]
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.solution is not None


REDUCED_INFEASIBLE = "reduced-infeasible"


def matheuristic_solve(
    inst: Instance,
    params: RankingParams,
    *,
    engine: str = "auto",
    bound_every: int = 1,
    delta: Mapping[int, int | float] | None = None,
) -> MatheuristicResult:
    """Rank, select, then solve the reduced model exactly within ``params.time_limit``.

    A ``delta`` from an earlier :func:`rank_variables` call on the same
    instance skips the ranking phase (its time is then reported as zero).
    """
    t0 = time.perf_counter()
    if delta is None:
        delta = rank_variables(inst, engine=engine)
    pool = select_variables(inst, delta, params)
    t1 = time.perf_counter()
    try:
        bound: int | float | None = lb2(inst, engine=engine)
    except InfeasibleError:
        bound = INF
    t2 = time.perf_counter()
    kept = len(pool.selected) / inst.n_assignments if inst.n_assignments else 1.0
    timings = {"rank": t1 - t0, "lb2": t2 - t1}

    sub = inst.subset(pool.selected, name=inst.name)
    covered = {a.task for a in sub.assignments}
    if len(covered) < inst.n_tasks:
        timings["solve"] = 0.0
        return MatheuristicResult(REDUCED_INFEASIBLE, None, None, bound, None, kept, pool, timings)
    res = branch_and_bound(sub, params.time_limit, engine=engine, bound_every=bound_every)
    timings["solve"] = res.wall_time
    if res.status in (INFEASIBLE, NO_INCUMBENT_TIMEOUT):
        status = REDUCED_INFEASIBLE if res.status == INFEASIBLE else NO_INCUMBENT_TIMEOUT
        return MatheuristicResult(status, None, None, bound, None, kept, pool, timings, res.nodes)
    chosen = inst.lift(sub, res.solution.chosen)
    ev = evaluate(inst, chosen)
    assert ev.feasible, ev.violations
    sol = Solution(chosen, ev.cost, True)
    gap = None
    if bound not in (None, INF) and ev.cost:
        gap = (ev.cost - bound) / ev.cost
    elif bound not in (None, INF):
        gap = 0.0
    return MatheuristicResult(res.status, sol, ev.cost, bound, gap, kept, pool, timings, res.nodes)


__all__ = [
    "FEASIBLE_TIMEOUT",
    "MatheuristicResult",
    "OPTIMAL",
    "REDUCED_INFEASIBLE",
    "RankedPool",
    "RankingParams",
    "matheuristic_solve",
    "rank_variables",
    "select_variables",
]

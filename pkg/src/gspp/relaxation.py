"""Matching-based lower bounds.

Two graphs over the tasks give two bounds:

* the conflict graph joins tasks whose cheapest assignments clash; an edge
  weighs the smaller second-best surcharge of its ends, and the bound is the
  sum of cheapest costs plus a maximum-weight matching;
* the pair graph is complete, an edge weighs the cheapest compatible pair of
  assignments for its two tasks, and the bound is a maximum-weight matching
  (an artificial vertex pads an odd task count, joined at each task's
  cheapest cost).

The pair bound always dominates the conflict bound.  Fixing one assignment
and rebuilding the pair graph over the other tasks gives the probe bound
used for variable elimination and ranking.

Every routine here has a plain-Python engine (works with any installed
pairwise oracle) and a compiled engine for the default oracle; ``engine``
selects one explicitly, ``"auto"`` picks the compiled engine when possible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels as K
from .core import INF, Instance, _pair_ok, compatible, trivial_bound
from .errors import ContractError, InfeasibleError
from .matching import WeightedGraph, max_weight_matching


class UnusableAssignment(InfeasibleError):
    """A fixed assignment cannot appear in any feasible solution."""


@dataclass(frozen=True)
class TaskCostProfile:
    best: tuple[int, ...]
    second: tuple[int | float, ...]  # INF when the task has one assignment
    argmin: tuple[int, ...]


def task_costs(inst: Instance) -> TaskCostProfile:
    best, second, arg = [], [], []
    for ids in inst.by_task:
        arg.append(ids[0])
        best.append(inst.assignments[ids[0]].cost)
        second.append(inst.assignments[ids[1]].cost if len(ids) > 1 else INF)
    return TaskCostProfile(tuple(best), tuple(second), tuple(arg))


def _use_compiled(inst: Instance, engine: str) -> bool:
    if engine == "python":
        return False
    if engine == "compiled":
        if inst.oracle is not None:
            raise ContractError("the compiled engine only supports the default oracle")
        return True
    if engine != "auto":
        raise ContractError(f"unknown engine {engine!r}")
    return inst.oracle is None


def _to_bound(v) -> int | float:
    return INF if v >= K.INF else int(v)


# ---------------------------------------------------------------- conflict graph


def build_g1(inst: Instance) -> WeightedGraph:
    """Conflict graph on the cheapest assignments.

    Raises:
        InfeasibleError: two single-option tasks whose only assignments clash.
    """
    prof = task_costs(inst)
    edges = []
    for i in range(inst.n_tasks):
        for j in range(i + 1, inst.n_tasks):
            if compatible(inst, prof.argmin[i], prof.argmin[j]):
                continue
            w = min(prof.second[i] - prof.best[i], prof.second[j] - prof.best[j])
            if w == INF:
                raise InfeasibleError(f"tasks {i} and {j} each have a single option and they clash")
            edges.append((i, j, int(w)))
    return WeightedGraph(inst.n_tasks, tuple(edges))


def lb1(inst: Instance) -> int:
    return max_weight_matching(build_g1(inst)).weight + sum(task_costs(inst).best)


# -------------------------------------------------------------------- pair graph


@dataclass(frozen=True)
class PairGraph:
    """Pair graph plus the task behind each vertex.

    ``artificial`` is the index of the padding vertex, if any.
    """

    graph: WeightedGraph
    tasks: tuple[int, ...]
    artificial: int | None

    def vertex_of(self, task: int) -> int:
        return self.tasks.index(task)


def _py_usable(inst: Instance, tasks: Sequence[int], fixed: int | None, caplim) -> dict[int, list[int]]:
    A = inst.assignments
    out = {}
    for t in tasks:
        ids = inst.by_task[t]
        if fixed is not None:
            f = A[fixed]
            ids = [j for j in ids if _pair_ok(inst, A[j], f, caplim)]
        out[t] = list(ids)
    return out


def _py_pair_min(inst: Instance, li: list[int], lj: list[int], caplim) -> tuple[int | float, int, int]:
    A = inst.assignments
    if not li or not lj:
        return INF, -1, -1
    minj = A[lj[0]].cost
    best, ba, bb = INF, -1, -1
    for a in li:
        ca = A[a].cost
        if ca + minj >= best:
            break
        for b in lj:
            cb = A[b].cost
            if ca + cb >= best:
                break
            if _pair_ok(inst, A[a], A[b], caplim):
                best, ba, bb = ca + cb, a, b
                break
    return best, ba, bb


def _pair_weights(
    inst: Instance,
    tasks: Sequence[int],
    fixed: int | None,
    engine: str,
    alive: np.ndarray | None = None,
    caplim: Mapping[int, int] | None = None,
) -> tuple[list[list[int | float]], list[int | float]]:
    """Edge-weight matrix and artificial weights over ``tasks`` (INF = none)."""
    m = len(tasks)
    if _use_compiled(inst, engine):
        P = inst.packed
        al = np.ones(inst.n_assignments, np.bool_) if alive is None else alive
        lim = P.cap if caplim is None else np.array([caplim[c.id] for c in inst.capacities], np.int64)
        W, art = K.g2_matrix(
            np.asarray(tasks, np.int64), -1 if fixed is None else fixed, al, lim, P.arrays
        )
        return (
            [[_to_bound(W[x, y]) for y in range(m)] for x in range(m)],
            [_to_bound(v) for v in art],
        )
    lim = inst.capacity if caplim is None else caplim
    usable = _py_usable(inst, tasks, fixed, lim)
    if alive is not None:
        usable = {t: [j for j in ids if alive[j]] for t, ids in usable.items()}
    art = [inst.assignments[usable[t][0]].cost if usable[t] else INF for t in tasks]
    W: list[list[int | float]] = [[INF] * m for _ in range(m)]
    for x in range(m):
        for y in range(x + 1, m):
            w = _py_pair_min(inst, usable[tasks[x]], usable[tasks[y]], lim)[0]
            W[x][y] = W[y][x] = w
    return W, art


def build_g2(inst: Instance, fixed: int | None = None, *, engine: str = "auto") -> PairGraph:
    """Pair graph over all tasks, or over the other tasks when ``fixed`` is given.

    With ``fixed`` set, only assignments compatible with it are usable, both
    for the pair edges and for the artificial-vertex edges.

    Raises:
        InfeasibleError: (no ``fixed``) some pair of tasks has no compatible pair.
        UnusableAssignment: (with ``fixed``) the fixed assignment leaves some
            task or pair of tasks without a usable choice.
    """
    if fixed is not None and not 0 <= fixed < inst.n_assignments:
        raise ContractError(f"no assignment with id {fixed}")
    skip = inst.assignments[fixed].task if fixed is not None else -1
    tasks = [t for t in range(inst.n_tasks) if t != skip]
    W, art = _pair_weights(inst, tasks, fixed, engine)
    m = len(tasks)
    edges = []
    for x in range(m):
        for y in range(x + 1, m):
            if W[x][y] == INF:
                if fixed is None:
                    raise InfeasibleError(f"tasks {tasks[x]} and {tasks[y]} have no compatible pair")
                raise UnusableAssignment(
                    f"assignment {fixed} leaves tasks {tasks[x]}, {tasks[y]} without a compatible pair"
                )
            edges.append((x, y, W[x][y]))
    artificial = None
    if m % 2:
        artificial = m
        for x in range(m):
            if art[x] == INF:
                raise UnusableAssignment(f"assignment {fixed} leaves task {tasks[x]} without options")
            edges.append((x, m, art[x]))
    return PairGraph(WeightedGraph(m + (m % 2), tuple(edges)), tuple(tasks), artificial)


def lb2(inst: Instance, *, engine: str = "auto") -> int:
    return max_weight_matching(build_g2(inst, engine=engine).graph).weight


def probe_bound(inst: Instance, k: int, *, engine: str = "auto") -> int | float:
    """Cost of ``k`` plus the pair-graph bound with ``k`` fixed (INF if unusable)."""
    if not 0 <= k < inst.n_assignments:
        raise ContractError(f"no assignment with id {k}")
    try:
        pg = build_g2(inst, fixed=k, engine=engine)
    except UnusableAssignment:
        return INF
    return inst.assignments[k].cost + max_weight_matching(pg.graph).weight


def probe_all(inst: Instance, ids: Sequence[int] | None = None, *, engine: str = "auto") -> list[int | float]:
    """Probe bound for every id in ``ids`` (default: all assignments).

    Raises:
        InfeasibleError: if the unrestricted pair graph already shows the
            instance is infeasible (every probe would be INF).
    """
    ids = list(range(inst.n_assignments)) if ids is None else list(ids)
    if not ids:
        return []
    if not _use_compiled(inst, engine):
        return [probe_bound(inst, k, engine="python") for k in ids]
    P = inst.packed
    alive = np.ones(inst.n_assignments, np.bool_)
    c2, pa, pb = K.g2_argmin(alive, P.cap, P.arrays, inst.n_tasks)
    out = K.probe_many(np.asarray(ids, np.int64), alive, P.cap, P.arrays, inst.n_tasks, c2, pa, pb)
    return [_to_bound(v) for v in out]


# ------------------------------------------------------------------------ report


@dataclass
class BoundReport:
    instance: str
    n_tasks: int
    n_vars: int
    trivial: int
    lb1: int | None
    lb2: int | None
    e1: int
    e2: int
    infeasible: bool = False
    timings: dict[str, float] = field(default_factory=dict)


def bound_report(inst: Instance, *, engine: str = "auto") -> BoundReport:
    """Trivial, conflict-graph and pair-graph bounds with per-phase wall times.

    An infeasibility detected while building a graph is recorded in the
    report (bounds left as ``None``) rather than raised.
    """
    rep = BoundReport(inst.name, inst.n_tasks, inst.n_assignments, trivial_bound(inst), None, None, 0, 0)
    t0 = time.perf_counter()
    try:
        g1 = build_g1(inst)
        rep.e1 = len(g1.edges)
        rep.lb1 = max_weight_matching(g1).weight + rep.trivial
    except InfeasibleError:
        rep.infeasible = True
    t1 = time.perf_counter()
    try:
        pg = build_g2(inst, engine=engine)
        rep.e2 = len(pg.graph.edges)
        rep.lb2 = max_weight_matching(pg.graph).weight
    except InfeasibleError:
        rep.infeasible = True
    t2 = time.perf_counter()
    rep.timings = {"lb1": t1 - t0, "lb2": t2 - t1}
    return rep


def residual_lb2_python(
    inst: Instance, tasks: Sequence[int], alive, caplim: Mapping[int, int]
) -> int | float:
    """Pair-graph bound over ``tasks`` using only ``alive`` assignments (Python engine)."""
    if not tasks:
        return 0
    W, art = _pair_weights(inst, tasks, None, "python", alive=alive, caplim=caplim)
    m = len(tasks)
    if any(v == INF for v in art):
        return INF
    edges = []
    for x in range(m):
        for y in range(x + 1, m):
            if W[x][y] == INF:
                return INF
            edges.append((x, y, W[x][y]))
    if m % 2:
        edges.extend((x, m, art[x]) for x in range(m))
    return max_weight_matching(WeightedGraph(m + m % 2, tuple(edges))).weight


__all__ = [
    "BoundReport",
    "PairGraph",
    "TaskCostProfile",
    "UnusableAssignment",
    "bound_report",
    "build_g1",
    "build_g2",
    "lb1",
    "lb2",
    "probe_all",
    "probe_bound",
    "task_costs",
]

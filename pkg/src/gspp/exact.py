"""Exact solving by depth-first branch-and-bound, and LP model export.

Tasks are fixed one at a time, fewest options first.  After each choice the
remaining assignments are filtered down to those compatible with everything
chosen so far (capacities shrink by what the choice consumed), and the node
is bounded by its cost plus the pair-graph matching bound of the residual
problem.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from . import _kernels as K
from .core import INF, Instance, Solution, evaluate, format_cost
from .errors import ContractError, InfeasibleError
from .relaxation import _use_compiled, residual_lb2_python

OPTIMAL = "optimal"
FEASIBLE_TIMEOUT = "feasible-timeout"
INFEASIBLE = "infeasible"
NO_INCUMBENT_TIMEOUT = "no-incumbent-timeout"


@dataclass
class SolveResult:
    status: str
    solution: Solution | None
    best_bound: int | float | None
    nodes: int
    wall_time: float

    @property
    def cost(self) -> int | None:
        return None if self.solution is None else self.solution.cost

    @property
    def gap(self) -> float | None:
        """Relative distance between incumbent and bound (0 when proven optimal)."""
        if self.solution is None or self.best_bound is None or self.best_bound == INF:
            return None
        if self.cost == 0:
            return 0.0
        return (self.cost - self.best_bound) / abs(self.cost)


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, inst, time_limit, bound_every, prune, node_limit, engine):
        self.inst = inst
        self.compiled = _use_compiled(inst, engine)
        self.deadline = None if time_limit is None else time.perf_counter() + time_limit
        self.bound_every = max(1, bound_every)
        self.prune = prune
        self.node_limit = node_limit
        self.nodes = 0
        self.best: int | float = INF
        self.best_pick: dict[int, int] | None = None
        self.path_bounds: list[int | float] = []
        n = inst.n_tasks
        self.order = sorted(range(n), key=lambda t: (len(inst.by_task[t]), t))
        self.pick: dict[int, int] = {}
        self.cost = [a.cost for a in inst.assignments]
        self.cap_index = {c.id: x for x, c in enumerate(inst.capacities)}

    # -- bounds ---------------------------------------------------------

    def _bound(self, depth, alive, caplim):
        rest = self.order[depth:]
        if self.compiled:
            tasks = np.asarray(rest, np.int64)
            if depth % self.bound_every == 0:
                v = K.residual_bound(tasks, alive, caplim, self.inst.packed.arrays)
            else:
                v = K.residual_trivial(tasks, alive, self.inst.packed.arrays)
            return INF if v >= K.INF else int(v)
        if depth % self.bound_every == 0:
            return residual_lb2_python(self.inst, rest, alive, caplim)
        total = 0
        for t in rest:
            ids = [j for j in self.inst.by_task[t] if alive[j]]
            if not ids:
                return INF
            total += self.inst.assignments[ids[0]].cost
        return total

    def _fits(self, a, caplim):
        if self.compiled:
            return K.fits(a, self.inst.packed.arrays, caplim)
        return all(u <= caplim[r] for r, u in self.inst.assignments[a].cap_usage)

    def _consume(self, a, caplim):
        usage = self.inst.assignments[a].cap_usage
        if self.compiled:
            if not usage:
                return caplim
            out = caplim.copy()
            for r, u in usage:
                out[self.cap_index[r]] -= u
            return out
        out = dict(caplim)
        for r, u in usage:
            out[r] -= u
        return out

    def _refine(self, alive, a, depth, caplim_after):
        if self.compiled:
            remflag = np.zeros(self.inst.n_tasks, np.bool_)
            remflag[self.order[depth + 1 :]] = True
            return K.refine(alive, a, remflag, self.inst.packed.arrays, caplim_after)
        inst = self.inst
        A, bits, oracle = inst.assignments, inst.bits, inst.oracle
        new = list(alive)
        for t in self.order[depth + 1 :]:
            for x in inst.by_task[t]:
                if not new[x]:
                    continue
                if (
                    bits[x] & bits[a]
                    or any(u > caplim_after[r] for r, u in A[x].cap_usage)
                    or (oracle is not None and not oracle(A[x], A[a]))
                ):
                    new[x] = False
        for x in self.inst.by_task[A[a].task]:
            new[x] = x == a
        return new

    # -- search ---------------------------------------------------------

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _Timeout
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Timeout

    def run(self, alive, caplim, depth=0, partial=0):
        self._tick()
        n = self.inst.n_tasks
        if depth == n:
            if partial < self.best:
                self.best = partial
                self.best_pick = dict(self.pick)
            return
        if self.prune:
            bound = partial + self._bound(depth, alive, caplim)
            if bound == INF or bound >= self.best:
                return
        else:
            bound = partial
        self.path_bounds.append(bound)
        t = self.order[depth]
        cost = self.cost
        for a in self.inst.by_task[t]:
            if not alive[a] or not self._fits(a, caplim):
                continue
            if self.prune and partial + cost[a] >= self.best:
                break
            after = self._consume(a, caplim)
            child = self._refine(alive, a, depth, after)
            self.pick[t] = a
            self.run(child, after, depth + 1, partial + cost[a])
            del self.pick[t]
        self.path_bounds.pop()


def branch_and_bound(
    inst: Instance,
    time_limit: float | None = None,
    *,
    bound_every: int = 1,
    prune: bool = True,
    incumbent: Solution | dict[int, int] | None = None,
    eliminate: bool = True,
    node_limit: int | None = None,
    engine: str = "auto",
) -> SolveResult:
    """Solve ``inst`` exactly, or return the best found when a limit hits.

    ``bound_every`` recomputes the matching bound every that many levels and
    uses the sum of residual minima in between.  ``prune=False`` turns off
    bound-based pruning (for testing).  A feasible ``incumbent`` seeds the
    search; with ``eliminate`` its cost is first used to drop assignments
    whose probe bound exceeds it, which never removes an optimal solution.
    """
    t0 = time.perf_counter()
    seed = None
    if incumbent is not None:
        seed = dict(incumbent.chosen if isinstance(incumbent, Solution) else incumbent)
        ev = evaluate(inst, seed)
        if not ev.feasible:
            raise ContractError("seed incumbent is infeasible: " + "; ".join(ev.violations))
    if seed is None or not (eliminate and prune):
        return _search(inst, time_limit, bound_every, prune, seed, node_limit, engine, t0)

    from .reduction import reduce

    red = reduce(inst, ev.cost, engine=engine)
    sub = red.reduced
    local = {t: sub.id_of_source[inst.assignments[j].source] for t, j in seed.items()}
    left = None if time_limit is None else max(0.0, time_limit - (time.perf_counter() - t0))
    res = _search(sub, left, bound_every, prune, local, node_limit, engine, t0)
    if res.solution is not None:
        res.solution = Solution(inst.lift(sub, res.solution.chosen), res.solution.cost, True)
    return res


def _search(inst, time_limit, bound_every, prune, seed, node_limit, engine, t0) -> SolveResult:
    s = _Search(inst, time_limit, bound_every, prune, node_limit, engine)
    if seed is not None:
        s.best = inst.cost_of(seed.values())
        s.best_pick = dict(seed)
    if s.compiled:
        alive = np.ones(inst.n_assignments, np.bool_)
        caplim = inst.packed.cap.copy()
    else:
        alive = [True] * inst.n_assignments
        caplim = dict(inst.capacity)
    done = True
    try:
        s.run(alive, caplim)
    except _Timeout:
        done = False
    wall = time.perf_counter() - t0
    sol = None
    if s.best_pick is not None:
        sol = Solution(dict(sorted(s.best_pick.items())), int(s.best), True)
    if done:
        if sol is None:
            return SolveResult(INFEASIBLE, None, INF, s.nodes, wall)
        return SolveResult(OPTIMAL, sol, sol.cost, s.nodes, wall)
    # every unexplored subtree hangs off a node on the current path
    bb = None
    if s.prune and (s.path_bounds or sol is not None):
        bb = min(s.path_bounds + [s.best])
    if sol is None:
        return SolveResult(NO_INCUMBENT_TIMEOUT, None, bb, s.nodes, wall)
    return SolveResult(FEASIBLE_TIMEOUT, sol, bb, s.nodes, wall)


WARM_START_POOLS = (5, 20, 100)


def solve(
    inst: Instance,
    time_limit: float | None = None,
    *,
    warm_start: bool = True,
    engine: str = "auto",
    bound_every: int = 1,
) -> SolveResult:
    """Exact solve, optionally warm-started.

    The warm start solves small ranked pools (``WARM_START_POOLS`` options
    per task) until one yields a feasible solution, then hands that solution
    to :func:`branch_and_bound` as incumbent.
    """
    t0 = time.perf_counter()
    seed = None
    if warm_start and inst.n_assignments:
        from .matheuristic import RankingParams, matheuristic_solve

        for mu in WARM_START_POOLS:
            budget = None if time_limit is None else time_limit / 4
            try:
                mh = matheuristic_solve(inst, RankingParams(0.0, mu, budget), engine=engine)
            except InfeasibleError:
                break
            if mh.solution is not None:
                seed = mh.solution
                break
            if max(len(ids) for ids in inst.by_task) <= mu:
                break
    left = None if time_limit is None else max(0.0, time_limit - (time.perf_counter() - t0))
    res = branch_and_bound(inst, left, incumbent=seed, engine=engine, bound_every=bound_every)
    res.wall_time = time.perf_counter() - t0
    return res


# ------------------------------------------------------------------ LP export


def _wrap_terms(head: str, terms: list[str], tail: str = "", width: int = 78) -> list[str]:
    lines = []
    cur = head
    for i, term in enumerate(terms):
        piece = term if i == 0 else ("- " + term[1:] if term.startswith("-") else "+ " + term)
        if len(cur) + 1 + len(piece) > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {piece}" if cur.strip() else f"{cur}{piece}"
    if tail:
        if len(cur) + 1 + len(tail) > width:
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {tail}"
    lines.append(cur)
    return lines


def lp_model(inst: Instance) -> str:
    """The binary program as CPLEX LP text (fixed ordering and number format)."""
    A = inst.assignments
    out = [f"\\ {inst.name}", "Minimize"]
    obj = [f"{format_cost(a.cost, inst.scale)} y_{a.id}" for a in A]
    out += _wrap_terms(" obj:", obj or ["0 y_0"])
    out.append("Subject To")
    for t, ids in enumerate(inst.by_task):
        out += _wrap_terms(f" task_{t}:", [f"y_{j}" for j in sorted(ids)], "= 1")
    users: dict[int, list[int]] = {}
    for a in A:
        for r in a.footprint:
            users.setdefault(r, []).append(a.id)
    for r in sorted(users):
        out += _wrap_terms(f" res_{r}:", [f"y_{j}" for j in users[r]], "<= 1")
    cap_users: dict[int, list[tuple[int, int]]] = {c.id: [] for c in inst.capacities}
    for a in A:
        for r, u in a.cap_usage:
            cap_users[r].append((a.id, u))
    for c in inst.capacities:
        if cap_users[c.id]:
            terms = [f"{u} y_{j}" for j, u in cap_users[c.id]]
            out += _wrap_terms(f" cap_{c.id}:", terms, f"<= {c.capacity}")
    out.append("Binary")
    names = [f"y_{a.id}" for a in A]
    for i in range(0, len(names), 10):
        out.append(" " + " ".join(names[i : i + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(inst: Instance, destination: str | Path | TextIO) -> None:
    text = lp_model(inst)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)


@dataclass(frozen=True)
class LpCounts:
    variables: int
    equalities: int
    packing: int
    capacity: int


def lp_counts(text: str) -> LpCounts:
    """Row and variable counts of a model written by :func:`lp_model`."""
    lines = text.splitlines()
    eq = sum(1 for ln in lines if ln.startswith(" task_"))
    pk = sum(1 for ln in lines if ln.startswith(" res_"))
    cp = sum(1 for ln in lines if ln.startswith(" cap_"))
    start = lines.index("Binary") + 1
    nv = sum(len(ln.split()) for ln in lines[start : lines.index("End")])
    return LpCounts(nv, eq, pk, cp)

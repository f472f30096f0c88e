"""Matching lower bound for crew recovery.

Each driver may take at most one duty (or stay idle); a duty covers a set of
tasks at a cost, and every task must be covered exactly once.

Duty costs are spread evenly over the tasks a duty covers, so that any
solution's cost is the sum of its per-task shares.  An edge ``(i, j)`` is
then the cheapest way to account for both tasks: one duty covering both, or
two duties of different drivers each covering one but not the other.  The
bound is an exact fraction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ContractError, InfeasibleError
from ..matching import WeightedGraph, max_weight_matching
from .params import dump_params, get_int, get_int_sets, get_ints


@dataclass(frozen=True)
class Duty:
    tasks: frozenset[int]
    cost: int


@dataclass(frozen=True)
class CrewInstance:
    n_tasks: int
    duties: tuple[tuple[Duty, ...], ...]  # per driver

    @property
    def n_drivers(self) -> int:
        return len(self.duties)

    def check(self) -> None:
        for k, lst in enumerate(self.duties):
            for p in lst:
                if not p.tasks:
                    raise ContractError(f"driver {k}: empty duty")
                if p.cost < 0:
                    raise ContractError(f"driver {k}: negative duty cost")
                if min(p.tasks) < 0 or max(p.tasks) >= self.n_tasks:
                    raise ContractError(f"driver {k}: duty task out of range")

    @classmethod
    def build(cls, n_tasks: int, duties: list[list[tuple[set[int], int]]]) -> CrewInstance:
        return cls(n_tasks, tuple(tuple(Duty(frozenset(t), c) for t, c in lst) for lst in duties))

    def to_text(self) -> str:
        items: list[tuple[str, object]] = [("kind", "crew"), ("tasks", self.n_tasks), ("drivers", self.n_drivers)]
        for k, lst in enumerate(self.duties):
            items.append((f"driver{k}.duties", [sorted(p.tasks) for p in lst]))
            items.append((f"driver{k}.costs", [p.cost for p in lst]))
        return dump_params(items)

    @classmethod
    def from_mapping(cls, d: dict[str, str]) -> CrewInstance:
        n = get_int(d, "tasks")
        out = []
        for k in range(get_int(d, "drivers")):
            sets = get_int_sets(d, f"driver{k}.duties") if d.get(f"driver{k}.duties") else []
            costs = get_ints(d, f"driver{k}.costs", [])
            if len(sets) != len(costs):
                raise ContractError(f"driver {k}: duty and cost lists differ in length")
            out.append(tuple(Duty(frozenset(s), c) for s, c in zip(sets, costs)))
        return cls(n, tuple(out))


def crew_lb2(ci: CrewInstance) -> Fraction:
    """Matching bound on the cheapest exact cover.

    Raises:
        InfeasibleError: a task no duty covers, or a pair of tasks with no
            admissible cover.
    """
    ci.check()
    n = ci.n_tasks
    if n == 0:
        return Fraction(0)
    sizes = {len(p.tasks) for lst in ci.duties for p in lst} or {1}
    den = math.lcm(*sizes)
    # share[k][x]: integer share (times den) of duty x of driver k per covered task
    cover: list[list[tuple[int, int, frozenset[int]]]] = [[] for _ in range(n)]
    for k, lst in enumerate(ci.duties):
        for p in lst:
            share = p.cost * (den // len(p.tasks))
            for t in p.tasks:
                cover[t].append((share, k, p.tasks))
    for t in range(n):
        if not cover[t]:
            raise InfeasibleError(f"task {t} is covered by no duty")
        cover[t].sort(key=lambda e: e[0])
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            best = math.inf
            for si, ki, pi in cover[i]:
                if j in pi:
                    best = min(best, 2 * si)
                    continue
                for sj, kj, pj in cover[j]:
                    if si + sj >= best:
                        break
                    if kj != ki and i not in pj:
                        best = si + sj
                        break
            if best == math.inf:
                raise InfeasibleError(f"tasks {i} and {j} have no admissible cover")
            edges.append((i, j, int(best)))
    if n % 2:
        edges.extend((t, n, cover[t][0][0]) for t in range(n))
    w = max_weight_matching(WeightedGraph(n + n % 2, tuple(edges))).weight
    return Fraction(w, den)


def crew_optimum(ci: CrewInstance) -> int | None:
    """Cheapest exact cover by enumerating one duty (or none) per driver."""
    ci.check()
    best = None
    full = frozenset(range(ci.n_tasks))
    for combo in itertools.product(*[(None, *lst) for lst in ci.duties]):
        used: set[int] = set()
        cost = 0
        ok = True
        for p in combo:
            if p is None:
                continue
            if used & p.tasks:
                ok = False
                break
            used |= p.tasks
            cost += p.cost
        if ok and used == full and (best is None or cost < best):
            best = cost
    return best

"""Instance model for set partitioning under packing constraints.

An instance has tasks ``0..n-1``, resource tuples ``0..R-1`` (opaque ids),
and a list of assignments.  Each assignment serves one task at an integer
cost, occupies a set of resource tuples, and may draw on capacitated
resources (e.g. cranes per time slot).  A solution picks one assignment per
task such that no resource tuple is used twice and no capacity is exceeded.

Costs are integers on a fixed-point ``scale`` (cost 125 with scale 10
means 12.5) so that all bound comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .errors import ContractError, SizeError

INF = math.inf

BRUTE_FORCE_LIMIT = 10**7

PairOracle = Callable[["Assignment", "Assignment"], bool]

_ORACLES: dict[str, PairOracle] = {}


def register_oracle(name: str, fn: PairOracle) -> None:
    """Make a stricter pairwise rule available by name (used by instance files).

    The rule is applied on top of the default footprint/capacity test and must
    never reject a pair that can co-exist in some feasible solution.
    """
    _ORACLES[name] = fn


def get_oracle(name: str) -> PairOracle:
    try:
        return _ORACLES[name]
    except KeyError:
        raise ContractError(f"unknown oracle {name!r}") from None


@dataclass(frozen=True)
class CapacitatedResource:
    id: int
    capacity: int


@dataclass(frozen=True)
class Assignment:
    """One execution mode (column) for a task.

    ``cap_usage`` is a sorted tuple of ``(resource id, amount)`` pairs.
    ``source`` is the id this assignment had in the instance it was cut
    from; it equals ``id`` for freshly built instances.
    """

    id: int
    task: int
    cost: int
    footprint: frozenset[int] = frozenset()
    cap_usage: tuple[tuple[int, int], ...] = ()
    label: str = ""
    source: int = -1

    def __post_init__(self) -> None:
        if self.source < 0:
            object.__setattr__(self, "source", self.id)
        if not isinstance(self.footprint, frozenset):
            object.__setattr__(self, "footprint", frozenset(self.footprint))
        if isinstance(self.cap_usage, Mapping):
            object.__setattr__(self, "cap_usage", tuple(sorted(self.cap_usage.items())))
        else:
            object.__setattr__(self, "cap_usage", tuple(sorted(tuple(p) for p in self.cap_usage)))


@dataclass(frozen=True, eq=False)
class Instance:
    n_tasks: int
    n_resources: int
    assignments: tuple[Assignment, ...]
    capacities: tuple[CapacitatedResource, ...] = ()
    name: str = "instance"
    application: str = "generic"
    scale: int = 1
    oracle_name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignments", tuple(self.assignments))
        object.__setattr__(self, "capacities", tuple(self.capacities))

    @property
    def n_assignments(self) -> int:
        return len(self.assignments)

    @cached_property
    def oracle(self) -> PairOracle | None:
        return get_oracle(self.oracle_name) if self.oracle_name else None

    @cached_property
    def by_task(self) -> tuple[tuple[int, ...], ...]:
        """Assignment ids per task, cheapest first (ties by id)."""
        lists: list[list[int]] = [[] for _ in range(self.n_tasks)]
        for a in self.assignments:
            if 0 <= a.task < self.n_tasks:
                lists[a.task].append(a.id)
        cost = [a.cost for a in self.assignments]
        return tuple(tuple(sorted(ids, key=lambda j: (cost[j], j))) for ids in lists)

    @cached_property
    def capacity(self) -> dict[int, int]:
        return {c.id: c.capacity for c in self.capacities}

    @cached_property
    def bits(self) -> tuple[int, ...]:
        """Footprints as Python integer bitsets."""
        out = []
        for a in self.assignments:
            x = 0
            for r in a.footprint:
                x |= 1 << r
            out.append(x)
        return tuple(out)

    @cached_property
    def packed(self):
        from ._packed import PackedInstance

        return PackedInstance.from_instance(self)

    def cost_of(self, ids: Iterable[int]) -> int:
        return sum(self.assignments[j].cost for j in ids)

    def subset(self, keep: Iterable[int], name: str | None = None) -> Instance:
        """Instance restricted to ``keep``, renumbered densely, sources kept."""
        kept = sorted(set(keep))
        new = []
        for new_id, old_id in enumerate(kept):
            a = self.assignments[old_id]
            new.append(
                Assignment(new_id, a.task, a.cost, a.footprint, a.cap_usage, a.label, a.source)
            )
        return Instance(
            self.n_tasks,
            self.n_resources,
            tuple(new),
            self.capacities,
            name or self.name,
            self.application,
            self.scale,
            self.oracle_name,
        )

    @cached_property
    def id_of_source(self) -> dict[int, int]:
        return {a.source: a.id for a in self.assignments}

    def lift(self, sub: Instance, chosen: Mapping[int, int]) -> dict[int, int]:
        """Map a choice made in ``sub`` (cut from this instance) to this instance's ids."""
        own = self.id_of_source
        return {t: own[sub.assignments[j].source] for t, j in chosen.items()}


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "OK" if self.ok else "\n".join(self.violations)


def validate_instance(inst: Instance) -> ValidationReport:
    """Collect every structural problem instead of stopping at the first."""
    v: list[str] = []
    if inst.n_tasks < 0:
        v.append("negative task count")
    if inst.n_resources < 0:
        v.append("negative resource count")
    if inst.scale < 1 or 10 ** round(math.log10(inst.scale)) != inst.scale:
        v.append(f"scale {inst.scale} is not a positive power of ten")
    cap_ids = [c.id for c in inst.capacities]
    if cap_ids != list(range(len(cap_ids))):
        v.append("capacitated resource ids are not 0..C-1 in order")
    caps = {}
    for c in inst.capacities:
        if c.capacity < 1:
            v.append(f"capacitated resource {c.id}: capacity {c.capacity} < 1")
        caps[c.id] = c.capacity
    sources: set[int] = set()
    for pos, a in enumerate(inst.assignments):
        tag = a.label or str(a.id)
        if a.source in sources:
            v.append(f"assignment {tag}: source id {a.source} already used")
        sources.add(a.source)
        if a.id != pos:
            v.append(f"assignment at position {pos} has id {a.id} (duplicate id or ids not dense)")
        if not 0 <= a.task < inst.n_tasks:
            v.append(f"assignment {tag}: task {a.task} out of range")
        if not isinstance(a.cost, int) or isinstance(a.cost, bool):
            v.append(f"assignment {tag}: cost {a.cost!r} is not an integer")
        elif a.cost < 0:
            v.append(f"assignment {tag}: negative cost {a.cost}")
        for r in a.footprint:
            if not 0 <= r < inst.n_resources:
                v.append(f"assignment {tag}: footprint resource {r} outside 0..{inst.n_resources - 1}")
        seen = set()
        for r, u in a.cap_usage:
            if r in seen:
                v.append(f"assignment {tag}: capacitated resource {r} listed twice")
            seen.add(r)
            if r not in caps:
                v.append(f"assignment {tag}: unknown capacitated resource {r}")
            elif u > caps[r]:
                v.append(f"assignment {tag}: usage {u} of resource {r} exceeds capacity {caps[r]}")
            if u < 0:
                v.append(f"assignment {tag}: negative usage {u} of resource {r}")
    counts = [0] * max(inst.n_tasks, 0)
    for a in inst.assignments:
        if 0 <= a.task < inst.n_tasks:
            counts[a.task] += 1
    for i, c in enumerate(counts):
        if c == 0:
            v.append(f"task {i}: empty assignment set")
    if inst.oracle_name and inst.oracle_name not in _ORACLES:
        v.append(f"unknown oracle {inst.oracle_name!r}")
    return ValidationReport(v)


def require_valid(inst: Instance) -> None:
    report = validate_instance(inst)
    if not report.ok:
        raise ContractError("invalid instance:\n" + str(report))


def _pair_ok(inst: Instance, a: Assignment, b: Assignment, caplim: Mapping[int, int] | None = None) -> bool:
    if inst.bits[a.id] & inst.bits[b.id]:
        return False
    if a.cap_usage or b.cap_usage:
        lim = inst.capacity if caplim is None else caplim
        total = dict(b.cap_usage)
        for r, u in a.cap_usage:
            total[r] = total.get(r, 0) + u
        if any(u > lim[r] for r, u in total.items()):
            return False
    oracle = inst.oracle
    if oracle is not None and not oracle(a, b):
        return False
    return True


def compatible(inst: Instance, j: int, k: int) -> bool:
    """Whether assignments ``j`` and ``k`` (of different tasks) can co-exist pairwise."""
    a, b = inst.assignments[j], inst.assignments[k]
    if a.task == b.task:
        raise ContractError(f"assignments {j} and {k} both serve task {a.task}")
    return _pair_ok(inst, a, b)


@dataclass
class Solution:
    chosen: dict[int, int]
    cost: int | None = None
    feasible: bool | None = None


@dataclass
class Evaluation:
    cost: int
    feasible: bool
    violations: list[str]


def evaluate(inst: Instance, sol: Solution | Mapping[int, int]) -> Evaluation:
    """Cost and full feasibility (not just pairwise) of a task -> assignment map."""
    chosen = sol.chosen if isinstance(sol, Solution) else dict(sol)
    for task, j in chosen.items():
        if not 0 <= j < inst.n_assignments or inst.assignments[j].task != task:
            raise ContractError(f"assignment {j} does not belong to task {task}")
    violations = []
    missing = [i for i in range(inst.n_tasks) if i not in chosen]
    if missing:
        violations.append(f"tasks without an assignment: {missing}")
    owner: dict[int, int] = {}
    usage: dict[int, int] = {}
    for task in sorted(chosen):
        a = inst.assignments[chosen[task]]
        for r in sorted(a.footprint):
            if r in owner:
                violations.append(f"resource {r} used by tasks {owner[r]} and {task}")
            else:
                owner[r] = task
        for r, u in a.cap_usage:
            usage[r] = usage.get(r, 0) + u
    for r in sorted(usage):
        if usage[r] > inst.capacity[r]:
            violations.append(f"capacitated resource {r}: usage {usage[r]} > {inst.capacity[r]}")
    if inst.oracle is not None:
        tasks = sorted(chosen)
        for x in range(len(tasks)):
            for y in range(x + 1, len(tasks)):
                a = inst.assignments[chosen[tasks[x]]]
                b = inst.assignments[chosen[tasks[y]]]
                if not inst.oracle(a, b):
                    violations.append(f"oracle {inst.oracle_name} rejects {a.id} with {b.id}")
    cost = inst.cost_of(chosen.values())
    return Evaluation(cost, not violations, violations)


def trivial_bound(inst: Instance) -> int:
    """Sum over tasks of the cheapest assignment."""
    return sum(inst.assignments[ids[0]].cost for ids in inst.by_task)


@dataclass
class BruteForceResult:
    z: int | None
    optimal: list[dict[int, int]]
    n_feasible: int

    @property
    def feasible(self) -> bool:
        return self.z is not None


def brute_force_optima(inst: Instance, limit: int = BRUTE_FORCE_LIMIT) -> BruteForceResult:
    """Exact optimum and every optimal solution by exhaustive enumeration.

    Tasks are fixed in index order; a partial choice is abandoned only when
    it is already infeasible, never on cost, so the search visits every
    feasible solution.

    Raises:
        SizeError: when the product of per-task option counts exceeds ``limit``.
    """
    size = 1
    for ids in inst.by_task:
        size *= len(ids)
    if size > limit:
        raise SizeError(f"{size} combinations exceed the brute-force limit {limit}")
    if any(not ids for ids in inst.by_task):
        return BruteForceResult(None, [], 0)

    n = inst.n_tasks
    bits = inst.bits
    A = inst.assignments
    caps = inst.capacity
    options = [[(j, bits[j], A[j].cap_usage) for j in ids] for ids in inst.by_task]
    cost = [a.cost for a in A]
    oracle = inst.oracle
    usage = dict.fromkeys(caps, 0)
    pick = [0] * n
    best: list = [None, [], 0]  # z, optimal list, feasible count

    def rec(i: int, used: int, acc: int) -> None:
        if i == n:
            best[2] += 1
            if best[0] is None or acc < best[0]:
                best[0] = acc
                best[1] = [list(pick)]
            elif acc == best[0]:
                best[1].append(list(pick))
            return
        for j, b, cu in options[i]:
            if b & used:
                continue
            if cu:
                if any(usage[r] + u > caps[r] for r, u in cu):
                    continue
            if oracle is not None and any(not oracle(A[pick[t]], A[j]) for t in range(i)):
                continue
            for r, u in cu:
                usage[r] += u
            pick[i] = j
            rec(i + 1, used | b, acc + cost[j])
            for r, u in cu:
                usage[r] -= u

    rec(0, 0, 0)
    optimal = [dict(enumerate(p)) for p in best[1]]
    return BruteForceResult(best[0], optimal, best[2])


def format_cost(value: int | float | None, scale: int = 1) -> str:
    """Exact decimal rendering of a scaled integer cost ('inf' for the sentinel)."""
    if value is None:
        return ""
    if value == INF:
        return "inf"
    value = int(value)
    if scale == 1:
        return str(value)
    digits = round(math.log10(scale))
    sign = "-" if value < 0 else ""
    q, r = divmod(abs(value), scale)
    if r == 0:
        return f"{sign}{q}"
    frac = str(r).rjust(digits, "0").rstrip("0")
    return f"{sign}{q}.{frac}"


def parse_cost(text: str, scale: int = 1) -> int | float:
    """Inverse of :func:`format_cost`."""
    text = text.strip()
    if text == "inf":
        return INF
    sign = -1 if text.startswith("-") else 1
    text = text.lstrip("-")
    whole, _, frac = text.partition(".")
    digits = round(math.log10(scale))
    if len(frac) > digits:
        raise ContractError(f"{text} has more decimals than scale {scale} allows")
    return sign * (int(whole or "0") * scale + int(frac.ljust(digits, "0") or "0"))

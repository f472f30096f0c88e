"""Parallel machines, step-deteriorating jobs, total completion time.

Slots are numbered 1..h.  A job started in slot ``s`` on a machine takes
``a`` slots if ``s <= d`` and ``a + b`` slots otherwise, and must finish by
slot ``h``.  Its cost is the last slot it occupies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..core import Assignment, Instance
from ..errors import ContractError
from .params import dump_params, get_int, get_ints


@dataclass(frozen=True)
class SchedParams:
    machines: int
    horizon: int
    base: tuple[int, ...]  # a_i
    penalty: tuple[int, ...]  # b_i
    due: tuple[int, ...]  # d_i, the deterioration date

    @property
    def jobs(self) -> int:
        return len(self.base)

    def check(self) -> None:
        if self.machines < 1 or self.horizon < 1:
            raise ContractError("need at least one machine and one slot")
        if not len(self.base) == len(self.penalty) == len(self.due):
            raise ContractError("per-job lists differ in length")
        for i, (a, b, d) in enumerate(zip(self.base, self.penalty, self.due)):
            if a < 1 or b < 0 or not 1 <= d <= self.horizon:
                raise ContractError(f"job {i}: need a >= 1, b >= 0, 1 <= d <= h")

    def to_text(self) -> str:
        return dump_params(
            [
                ("kind", "scheduling"),
                ("machines", self.machines),
                ("horizon", self.horizon),
                ("base", list(self.base)),
                ("penalty", list(self.penalty)),
                ("due", list(self.due)),
            ]
        )

    @classmethod
    def from_mapping(cls, d: dict[str, str]) -> SchedParams:
        return cls(
            get_int(d, "machines"),
            get_int(d, "horizon"),
            tuple(get_ints(d, "base")),
            tuple(get_ints(d, "penalty")),
            tuple(get_ints(d, "due")),
        )


def processing_time(p: SchedParams, job: int, start: int) -> int:
    return p.base[job] if start <= p.due[job] else p.base[job] + p.penalty[job]


def enumerate_scheduling(p: SchedParams, name: str = "sched") -> Instance:
    """One task per job, one assignment per (machine, feasible start)."""
    p.check()
    h = p.horizon
    out = []
    for job in range(p.jobs):
        for machine in range(p.machines):
            for s in range(1, h + 1):
                dur = processing_time(p, job, s)
                end = s + dur - 1
                if end > h:
                    continue
                fp = frozenset(machine * h + (t - 1) for t in range(s, end + 1))
                out.append(Assignment(len(out), job, end, fp, label=f"m{machine}s{s}"))
    return Instance(p.jobs, p.machines * h, tuple(out), name=name, application="scheduling")


def random_sched_params(
    jobs: int, machines: int, horizon: int, seed: int, max_base: int = 3, max_penalty: int = 2
) -> SchedParams:
    rng = np.random.default_rng(seed)
    base = rng.integers(1, max_base + 1, jobs)
    pen = rng.integers(0, max_penalty + 1, jobs)
    due = rng.integers(1, horizon + 1, jobs)
    return SchedParams(machines, horizon, *(tuple(int(x) for x in v) for v in (base, pen, due)))


def best_schedule_cost(p: SchedParams) -> int | None:
    """Minimum total completion time by direct schedule enumeration (tiny inputs only).

    Each machine runs its jobs back to back with possible idle gaps; every
    job gets an explicit (machine, start), and overlaps are rejected slot by
    slot.  Returns None when no schedule fits the horizon.
    """
    p.check()
    h = p.horizon
    best = None
    starts = range(1, h + 1)
    for combo in itertools.product(range(p.machines), repeat=p.jobs):
        for ss in itertools.product(starts, repeat=p.jobs):
            busy: set[tuple[int, int]] = set()
            total = 0
            ok = True
            for job in range(p.jobs):
                s = ss[job]
                end = s + processing_time(p, job, s) - 1
                if end > h:
                    ok = False
                    break
                slots = {(combo[job], t) for t in range(s, end + 1)}
                if busy & slots:
                    ok = False
                    break
                busy |= slots
                total += end
            if ok and (best is None or total < best):
                best = total
    return best

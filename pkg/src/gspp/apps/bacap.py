"""Berth allocation with quay crane assignment.

The quay is cut into ``positions`` equal segments and time into ``slots``.
A vessel placed at segment ``l`` from slot ``s`` with ``q`` cranes occupies
the rectangle ``[l, l + length) x [s, s + ceil(workload / q))`` and draws
``q`` cranes in every slot it occupies; at most ``cranes`` are available per
slot.  Time slots are numbered from 0 and a vessel finishes at the end of
its last slot (``finish = start + duration``).

Cost of a placement::

    alpha * q * duration + beta * |l - desired|
        + gamma * max(0, start - arrival) + delta * max(0, finish - due)

Optional windows bound how far from the desired berth and how late after
arrival a vessel may be placed; they only trim the enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Assignment, CapacitatedResource, Instance
from ..errors import ContractError
from .params import dump_params, get_int, get_int_sets, get_ints


@dataclass(frozen=True)
class BacapParams:
    slots: int
    positions: int
    cranes: int
    length: tuple[int, ...]
    workload: tuple[int, ...]
    arrival: tuple[int, ...]
    berth: tuple[int, ...]
    due: tuple[int, ...]
    crane_options: tuple[tuple[int, ...], ...]
    alpha: int = 1
    beta: int = 2
    gamma: int = 3
    delta: int = 5
    berth_window: int = -1  # -1: any position
    start_window: int = -1  # -1: any start after arrival

    @property
    def vessels(self) -> int:
        return len(self.length)

    def check(self) -> None:
        n = self.vessels
        if min(self.slots, self.positions, self.cranes) < 1:
            raise ContractError("slots, positions and cranes must be positive")
        lists = (self.workload, self.arrival, self.berth, self.due, self.crane_options)
        if any(len(v) != n for v in lists):
            raise ContractError("per-vessel lists differ in length")
        if min(self.alpha, self.beta, self.gamma, self.delta) < 0:
            raise ContractError("cost weights must be nonnegative")
        for i in range(n):
            if not 1 <= self.length[i] <= self.positions:
                raise ContractError(f"vessel {i}: length must lie in 1..positions")
            if self.workload[i] < 1:
                raise ContractError(f"vessel {i}: workload must be positive")
            if not 0 <= self.arrival[i] < self.slots:
                raise ContractError(f"vessel {i}: arrival outside the horizon")
            if not 0 <= self.berth[i] <= self.positions - self.length[i]:
                raise ContractError(f"vessel {i}: desired berth does not fit on the quay")
            if not self.crane_options[i] or any(q < 1 for q in self.crane_options[i]):
                raise ContractError(f"vessel {i}: crane options must be positive")

    def to_text(self) -> str:
        return dump_params(
            [
                ("kind", "bacap"),
                ("slots", self.slots),
                ("positions", self.positions),
                ("cranes", self.cranes),
                ("length", list(self.length)),
                ("workload", list(self.workload)),
                ("arrival", list(self.arrival)),
                ("berth", list(self.berth)),
                ("due", list(self.due)),
                ("crane_options", [list(q) for q in self.crane_options]),
                ("alpha", self.alpha),
                ("beta", self.beta),
                ("gamma", self.gamma),
                ("delta", self.delta),
                ("berth_window", self.berth_window),
                ("start_window", self.start_window),
            ]
        )

    @classmethod
    def from_mapping(cls, d: dict[str, str]) -> BacapParams:
        return cls(
            get_int(d, "slots"),
            get_int(d, "positions"),
            get_int(d, "cranes"),
            tuple(get_ints(d, "length")),
            tuple(get_ints(d, "workload")),
            tuple(get_ints(d, "arrival")),
            tuple(get_ints(d, "berth")),
            tuple(get_ints(d, "due")),
            tuple(tuple(q) for q in get_int_sets(d, "crane_options")),
            get_int(d, "alpha", 1),
            get_int(d, "beta", 2),
            get_int(d, "gamma", 3),
            get_int(d, "delta", 5),
            get_int(d, "berth_window", -1),
            get_int(d, "start_window", -1),
        )


def placement_cost(p: BacapParams, v: int, pos: int, start: int, q: int) -> int:
    dur = -(-p.workload[v] // q)
    return (
        p.alpha * q * dur
        + p.beta * abs(pos - p.berth[v])
        + p.gamma * max(0, start - p.arrival[v])
        + p.delta * max(0, start + dur - p.due[v])
    )


def enumerate_bacap(p: BacapParams, name: str = "bacap") -> Instance:
    """One task per vessel, one assignment per (position, start slot, crane count)."""
    p.check()
    L, T = p.positions, p.slots
    out = []
    for v in range(p.vessels):
        ln = p.length[v]
        lo_pos, hi_pos = 0, L - ln
        if p.berth_window >= 0:
            lo_pos = max(lo_pos, p.berth[v] - p.berth_window)
            hi_pos = min(hi_pos, p.berth[v] + p.berth_window)
        for q in sorted(set(p.crane_options[v])):
            if q > p.cranes:
                continue
            dur = -(-p.workload[v] // q)
            last = T - dur
            if p.start_window >= 0:
                last = min(last, p.arrival[v] + p.start_window)
            for s in range(p.arrival[v], last + 1):
                cap = tuple((t, q) for t in range(s, s + dur))
                for pos in range(lo_pos, hi_pos + 1):
                    fp = frozenset(t * L + l for t in range(s, s + dur) for l in range(pos, pos + ln))
                    cost = placement_cost(p, v, pos, s, q)
                    out.append(Assignment(len(out), v, cost, fp, cap, f"p{pos}s{s}q{q}"))
    caps = tuple(CapacitatedResource(t, p.cranes) for t in range(T))
    return Instance(p.vessels, T * L, tuple(out), caps, name=name, application="bacap")


def random_bacap_params(
    vessels: int,
    seed: int,
    *,
    positions: int = 20,
    slots: int | None = None,
    cranes: int = 8,
    berth_window: int = 3,
    start_window: int = 8,
) -> BacapParams:
    """Random vessel data with arrivals spread over the horizon."""
    rng = np.random.default_rng(seed)
    T = slots if slots is not None else 8 * vessels + 16
    length = rng.integers(3, 7, vessels)
    workload = rng.integers(6, 25, vessels)
    arrival = np.sort(rng.integers(0, max(1, T - 14), vessels))
    berth = np.array([rng.integers(0, positions - ln + 1) for ln in length])
    due = arrival + -(-workload // 3) + rng.integers(1, 4, vessels)
    options = tuple(tuple(q for q in (2, 3, 4) if q <= cranes) for _ in range(vessels))
    as_t = lambda v: tuple(int(x) for x in v)  # noqa: E731
    return BacapParams(
        T,
        positions,
        cranes,
        as_t(length),
        as_t(workload),
        as_t(arrival),
        as_t(berth),
        as_t(due),
        options,
        berth_window=berth_window,
        start_window=start_window,
    )


def generate_bacap(vessels: int, seed: int, **kwargs) -> Instance:
    p = random_bacap_params(vessels, seed, **kwargs)
    return enumerate_bacap(p, name=f"bacap-v{vessels}-s{seed}")

"""Upper-bound driven variable elimination.

An assignment whose probe bound is strictly above a known solution cost
cannot be part of any optimal solution and is dropped.  All probes of a
pass are taken against the same instance, so the removal set does not
depend on the order in which assignments are examined.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import INF, Instance
from .errors import InfeasibleError
from .relaxation import probe_all


class UpperBoundTooLow(InfeasibleError):
    """Elimination emptied a task: the bound was not a true upper bound or the instance is infeasible."""


@dataclass
class ReductionResult:
    reduced: Instance
    removed: list[tuple[int, int | float]]  # (original assignment id, probe bound)
    ub_used: int | float
    stats: dict[str, float] = field(default_factory=dict)

    @property
    def kept_fraction(self) -> float:
        total = self.reduced.n_assignments + len(self.removed)
        return self.reduced.n_assignments / total if total else 1.0


def reduce(inst: Instance, ub: int | float, *, fixpoint: bool = False, engine: str = "auto") -> ReductionResult:
    """Drop every assignment whose probe bound exceeds ``ub``.

    The reduced instance is renumbered densely; each surviving assignment's
    ``source`` keeps the id it had in ``inst``.  With ``fixpoint=True`` passes
    are repeated on the shrinking instance until nothing more is removed.

    Raises:
        UpperBoundTooLow: some task lost all of its assignments.
    """
    t0 = time.perf_counter()
    current = inst
    removed: list[tuple[int, int | float]] = []
    passes = 0
    probes = 0
    while True:
        passes += 1
        delta = probe_all(current, engine=engine)
        probes += len(delta)
        drop = [k for k, d in enumerate(delta) if d > ub]
        if not drop:
            break
        dropped = set(drop)
        for k in drop:
            removed.append((current.assignments[k].source, delta[k]))
        tasks_left = {a.task for a in current.assignments if a.id not in dropped}
        empty = [t for t in range(current.n_tasks) if t not in tasks_left]
        if empty:
            raise UpperBoundTooLow(
                f"bound {ub} removes every assignment of task(s) {empty}: "
                "it is not a valid upper bound or the instance is infeasible"
            )
        current = current.subset((k for k in range(current.n_assignments) if k not in dropped))
        if not fixpoint:
            break
    removed.sort()
    elapsed = time.perf_counter() - t0
    stats = {
        "passes": passes,
        "probes": probes,
        "time": elapsed,
        "time_per_probe": elapsed / probes if probes else 0.0,
    }
    return ReductionResult(current, removed, ub, stats)


__all__ = ["INF", "ReductionResult", "UpperBoundTooLow", "reduce"]

"""Flat array view of an :class:`~gspp.core.Instance` for the compiled kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PackedInstance:
    n_tasks: int
    cost: np.ndarray  # int64[nA]
    task: np.ndarray  # int64[nA]
    order: np.ndarray  # ids grouped by task, cheapest first
    tptr: np.ndarray  # order[tptr[i]:tptr[i+1]] are task i's ids
    fp: np.ndarray  # uint64[nA, W] footprint bitsets
    fwlo: np.ndarray  # first nonzero word per assignment
    fwhi: np.ndarray  # one past the last nonzero word
    cptr: np.ndarray  # CSR rows of capacitated usage
    cidx: np.ndarray
    cval: np.ndarray
    cap: np.ndarray  # int64[C]

    @classmethod
    def from_instance(cls, inst) -> PackedInstance:
        na = inst.n_assignments
        cost = np.fromiter((a.cost for a in inst.assignments), np.int64, na)
        task = np.fromiter((a.task for a in inst.assignments), np.int64, na)
        order = np.fromiter((j for ids in inst.by_task for j in ids), np.int64, na)
        tptr = np.zeros(inst.n_tasks + 1, np.int64)
        np.cumsum([len(ids) for ids in inst.by_task], out=tptr[1:])
        words = max(1, (inst.n_resources + 63) // 64)
        fp = np.zeros((na, words), np.uint64)
        fwlo = np.zeros(na, np.int64)
        fwhi = np.zeros(na, np.int64)
        for a in inst.assignments:
            if not a.footprint:
                continue
            rs = np.fromiter(a.footprint, np.int64)
            w = rs >> 6
            np.bitwise_or.at(fp[a.id], w, np.left_shift(np.uint64(1), (rs & 63).astype(np.uint64)))
            fwlo[a.id] = w.min()
            fwhi[a.id] = w.max() + 1
        cptr = np.zeros(na + 1, np.int64)
        np.cumsum([len(a.cap_usage) for a in inst.assignments], out=cptr[1:])
        cidx = np.fromiter((r for a in inst.assignments for r, _ in a.cap_usage), np.int64)
        cval = np.fromiter((u for a in inst.assignments for _, u in a.cap_usage), np.int64)
        cap = np.fromiter((c.capacity for c in inst.capacities), np.int64)
        return cls(inst.n_tasks, cost, task, order, tptr, fp, fwlo, fwhi, cptr, cidx, cval, cap)

    @property
    def arrays(self) -> tuple:
        return (
            self.cost,
            self.task,
            self.order,
            self.tptr,
            self.fp,
            self.fwlo,
            self.fwhi,
            self.cptr,
            self.cidx,
            self.cval,
        )

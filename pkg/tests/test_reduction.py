from __future__ import annotations

import pytest
from corpus import random_instance
from hypothesis import given, settings
from hypothesis import strategies as st

from gspp.core import INF, brute_force_optima
from gspp.reduction import UpperBoundTooLow, reduce


def test_removes_only_strictly_worse(e2):
    res = reduce(e2, 21)
    assert res.removed == [(1, 22), (2, 22), (4, 23)]
    assert [a.source for a in res.reduced.assignments] == [0, 3, 5]  # a, d, f: ties survive
    assert res.ub_used == 21
    assert res.kept_fraction == 0.5
    assert brute_force_optima(res.reduced).z == 21


def test_loose_bound_keeps_everything(e2):
    assert reduce(e2, 25).removed == []
    assert reduce(e2, INF).removed == []


def test_bound_below_optimum_is_reported(e2):
    with pytest.raises(UpperBoundTooLow):
        reduce(e2, 20)


def test_stats(e2):
    res = reduce(e2, 21)
    assert res.stats["passes"] == 1 and res.stats["probes"] == 6


def test_fixpoint_never_removes_less():
    for seed in range(60):
        inst = random_instance(seed)
        z = brute_force_optima(inst).z
        if z is None:
            continue
        once = reduce(inst, z)
        fix = reduce(inst, z, fixpoint=True)
        assert {k for k, _ in once.removed} <= {k for k, _ in fix.removed}
        assert brute_force_optima(fix.reduced).z == z


@given(st.integers(0, 10**6))
@settings(max_examples=120, deadline=None)
def test_optimal_solutions_survive(seed):
    inst = random_instance(seed)
    bf = brute_force_optima(inst)
    if bf.z is None:
        return
    res = reduce(inst, bf.z)
    survivors = {a.source for a in res.reduced.assignments}
    for sol in bf.optimal:
        assert set(sol.values()) <= survivors
    after = brute_force_optima(res.reduced)
    assert after.z == bf.z
    assert len(after.optimal) == len(bf.optimal)
    assert all(b > bf.z for _, b in res.removed)


@given(st.integers(0, 10**6), st.integers(0, 15))
@settings(max_examples=60, deadline=None)
def test_monotone_in_bound(seed, slack):
    inst = random_instance(seed)
    z = brute_force_optima(inst).z
    if z is None:
        return
    tight = {k for k, _ in reduce(inst, z).removed}
    loose = {k for k, _ in reduce(inst, z + slack).removed}
    assert loose <= tight
    assert tight == {k for k, _ in reduce(inst, z).removed}

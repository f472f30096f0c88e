from __future__ import annotations

import io

import pytest
from corpus import random_instance
from oracles import milp_optimum
from hypothesis import given, settings
from hypothesis import strategies as st

from gspp.apps import generate_bacap
from gspp.core import Assignment, Instance, brute_force_optima, evaluate, register_oracle
from gspp.errors import ContractError
from gspp.exact import (
    FEASIBLE_TIMEOUT,
    LpCounts,
    INFEASIBLE,
    NO_INCUMBENT_TIMEOUT,
    OPTIMAL,
    branch_and_bound,
    export_lp,
    lp_counts,
    lp_model,
    solve,
)


def test_small_fixtures(e1, e2):
    r1 = branch_and_bound(e1)
    assert (r1.status, r1.cost, r1.best_bound) == (OPTIMAL, 12, 12)
    assert r1.solution.chosen == {0: 1, 1: 2}
    r2 = branch_and_bound(e2)
    assert (r2.status, r2.cost) == (OPTIMAL, 21)


def test_total_clash_is_infeasible(e2):
    only_r0 = e2.subset([0, 2, 4])
    for engine in ("python", "compiled"):
        r = branch_and_bound(only_r0, engine=engine)
        assert r.status == INFEASIBLE and r.solution is None


def test_empty_instance():
    r = branch_and_bound(Instance(0, 0, ()))
    assert r.status == OPTIMAL and r.cost == 0


@given(st.integers(0, 10**6), st.sampled_from(["python", "compiled"]), st.integers(1, 3), st.booleans())
@settings(max_examples=200, deadline=None)
def test_matches_enumeration(seed, engine, every, prune):
    inst = random_instance(seed, max_tasks=8)
    z = brute_force_optima(inst).z
    r = branch_and_bound(inst, engine=engine, bound_every=every, prune=prune)
    if z is None:
        assert r.status == INFEASIBLE
    else:
        assert r.status == OPTIMAL and r.cost == z
        assert evaluate(inst, r.solution).feasible


def test_oracle_instances_use_the_plain_engine():
    register_oracle("even-total", lambda a, b: (a.cost + b.cost) % 2 == 0)
    for seed in range(40):
        base = random_instance(seed, max_tasks=6)
        inst = Instance(
            base.n_tasks, base.n_resources, base.assignments, base.capacities, oracle_name="even-total"
        )
        assert branch_and_bound(inst).cost == brute_force_optima(inst).z


@given(st.integers(0, 10**6), st.integers(1, 40))
@settings(max_examples=100, deadline=None)
def test_anytime_bounds_bracket_optimum(seed, limit):
    inst = random_instance(seed)
    z = brute_force_optima(inst).z
    r = branch_and_bound(inst, node_limit=limit)
    if r.status in (FEASIBLE_TIMEOUT, NO_INCUMBENT_TIMEOUT):
        if r.best_bound is not None and z is not None:
            assert r.best_bound <= z
        if r.solution is not None:
            assert r.cost >= z
    elif r.status == OPTIMAL:
        assert r.cost == z == r.best_bound


def test_seeded_incumbent(e2):
    r = branch_and_bound(e2, incumbent={0: 0, 1: 3, 2: 5})
    assert r.status == OPTIMAL and r.cost == 21
    r = branch_and_bound(e2, incumbent={0: 1, 1: 3, 2: 5}, eliminate=False)
    assert r.cost == 21
    with pytest.raises(ContractError):
        branch_and_bound(e2, incumbent={0: 0, 1: 2, 2: 5})


def test_time_limit_zero_returns_quickly():
    inst = generate_bacap(12, 3)
    r = branch_and_bound(inst, time_limit=0.0)
    assert r.status in (NO_INCUMBENT_TIMEOUT, FEASIBLE_TIMEOUT)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_crane_instances_match_milp(seed):
    inst = generate_bacap(10, seed, slots=40, positions=12, start_window=4, berth_window=2)
    assert solve(inst).cost == milp_optimum(inst)


def test_lp_counts(e1, e2):
    assert lp_counts(lp_model(e1)) == LpCounts(4, 2, 2, 0)
    assert lp_counts(lp_model(e2)) == LpCounts(6, 3, 4, 0)


def test_lp_text_is_exact_and_stable(e1):
    text = lp_model(e1)
    assert " obj: 5 y_0 + 8 y_1 + 4 y_2 + 9 y_3" in text
    assert " res_0: y_0 + y_2 <= 1" in text
    assert text == lp_model(e1)
    buf = io.StringIO()
    export_lp(e1, buf)
    assert buf.getvalue() == text


def test_lp_capacity_rows_and_decimals():
    inst = Instance(
        2,
        2,
        (Assignment(0, 0, 125, {0}, ((0, 2),)), Assignment(1, 1, 30, {1}, ((0, 3),))),
        capacities=(__import__("gspp").CapacitatedResource(0, 4),),
        scale=10,
    )
    text = lp_model(inst)
    assert " obj: 12.5 y_0 + 3 y_1" in text
    assert " cap_0: 2 y_0 + 3 y_1 <= 4" in text
    assert lp_counts(text).capacity == 1


def test_lp_long_rows_wrap():
    a = tuple(Assignment(k, 0, k, {0}) for k in range(60))
    text = lp_model(Instance(1, 1, a))
    assert max(len(line) for line in text.splitlines()) <= 80
    assert lp_counts(text).variables == 60

from __future__ import annotations

import pytest
from corpus import random_instance
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import best_with, pair_weight

from gspp.core import INF, Assignment, Instance, brute_force_optima, register_oracle, trivial_bound
from gspp.errors import ContractError, InfeasibleError
from gspp.relaxation import (
    UnusableAssignment,
    bound_report,
    build_g1,
    build_g2,
    lb1,
    lb2,
    probe_all,
    probe_bound,
    task_costs,
)

ENGINES = ("python", "compiled")


def test_two_task_bounds(e1):
    assert build_g1(e1).edges == ((0, 1, 3),)
    assert lb1(e1) == 12
    pg = build_g2(e1)
    assert pg.artificial is None and pg.graph.edges == ((0, 1, 12),)
    assert lb2(e1) == 12


def test_three_task_bounds(e2):
    assert build_g1(e2).edges == ((0, 1, 8), (0, 2, 7), (1, 2, 7))
    assert lb1(e2) == 14
    pg = build_g2(e2)
    assert pg.artificial == 3
    w = {(u, v): x for u, v, x in pg.graph.edges}
    assert (w[0, 1], w[0, 2], w[1, 2]) == (11, 11, 12)
    assert (w[0, 3], w[1, 3], w[2, 3]) == (1, 2, 3)
    assert lb2(e2) == 14


@pytest.mark.parametrize("engine", ENGINES)
def test_three_task_probes(e2, engine):
    # frozen from the cheapest solution through each assignment
    expected = [best_with(e2, k) for k in range(6)]
    assert expected == [21, 22, 22, 21, 23, 21]
    probes = [probe_bound(e2, k, engine=engine) for k in range(6)]
    assert probes == [21, 22, 22, 21, 23, 21]
    assert probe_all(e2, engine=engine) == probes


def test_fixing_filters_pairs(e2):
    # with a (resource 0) fixed only d and f remain for the other tasks
    pg = build_g2(e2, fixed=0)
    assert pg.tasks == (1, 2) and pg.graph.edges == ((0, 1, 20),)


def test_single_task_probe_is_cost():
    inst = Instance(1, 1, (Assignment(0, 0, 4, {0}), Assignment(1, 0, 9, {0})))
    assert probe_all(inst) == [4, 9]
    assert lb2(inst) == 4


def test_unusable_assignment_probe_is_inf():
    inst = Instance(
        2, 2, (Assignment(0, 0, 1, {0, 1}), Assignment(1, 0, 5, {0}), Assignment(2, 1, 2, {0}), Assignment(3, 1, 3, {1}))
    )
    # assignment 0 blocks every option of task 1
    for engine in ENGINES:
        assert probe_bound(inst, 0, engine=engine) == INF
        assert probe_all(inst, engine=engine)[0] == INF
    with pytest.raises(UnusableAssignment):
        build_g2(inst, fixed=0)


def test_single_option_clash_signals_infeasible():
    inst = Instance(2, 1, (Assignment(0, 0, 1, {0}), Assignment(1, 1, 1, {0})))
    with pytest.raises(InfeasibleError):
        build_g1(inst)
    with pytest.raises(InfeasibleError):
        lb2(inst)
    rep = bound_report(inst)
    assert rep.infeasible and rep.lb1 is None and rep.lb2 is None


def test_bound_report_fields(e2):
    rep = bound_report(e2)
    assert (rep.trivial, rep.lb1, rep.lb2, rep.e1, rep.e2) == (6, 14, 14, 3, 6)
    assert set(rep.timings) == {"lb1", "lb2"}


def test_profile(e2):
    p = task_costs(e2)
    assert p.best == (1, 2, 3) and p.second == (10, 10, 10) and p.argmin == (0, 2, 4)


def test_engine_selection(e1):
    with pytest.raises(ContractError):
        lb2(e1, engine="gpu")
    register_oracle("always", lambda a, b: True)
    inst = Instance(e1.n_tasks, e1.n_resources, e1.assignments, oracle_name="always")
    with pytest.raises(ContractError):
        lb2(inst, engine="compiled")
    assert lb2(inst) == 12


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_bound_chain_and_dominance(seed):
    inst = random_instance(seed)
    z = brute_force_optima(inst).z
    try:
        l1 = lb1(inst)
        l2 = lb2(inst)
    except InfeasibleError:
        assert z is None
        return
    assert trivial_bound(inst) <= l1 <= l2
    if z is not None:
        assert l2 <= z


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_engines_agree(seed):
    inst = random_instance(seed, max_tasks=7)
    tasks = list(range(inst.n_tasks))
    from gspp.relaxation import _pair_weights

    wp, ap = _pair_weights(inst, tasks, None, "python")
    wc, ac = _pair_weights(inst, tasks, None, "compiled")
    assert wp == wc and ap == ac
    assert probe_all(inst, engine="python") == probe_all(inst, engine="compiled")


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_pair_weights_match_enumeration(seed):
    inst = random_instance(seed, max_tasks=6)
    from gspp.relaxation import _pair_weights

    n = inst.n_tasks
    W, _ = _pair_weights(inst, list(range(n)), None, "compiled")
    for i in range(n):
        for j in range(i + 1, n):
            assert W[i][j] == pair_weight(inst, i, j)
    if inst.n_assignments:
        k = seed % inst.n_assignments
        rest = [t for t in range(n) if t != inst.assignments[k].task]
        Wk, _ = _pair_weights(inst, rest, k, "compiled")
        for x, i in enumerate(rest):
            for y, j in enumerate(rest):
                if x < y:
                    assert Wk[x][y] == pair_weight(inst, i, j, fixed=k)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_probe_never_exceeds_best_completion(seed):
    inst = random_instance(seed, max_tasks=7, max_options=4)
    probes = probe_all(inst)
    for k in range(inst.n_assignments):
        assert probes[k] <= best_with(inst, k)

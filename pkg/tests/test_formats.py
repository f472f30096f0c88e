from __future__ import annotations

import pytest
from corpus import random_instance
from hypothesis import given, settings
from hypothesis import strategies as st

from gspp.errors import FormatError
from gspp.formats import SolutionRecord, dumps_instance, dumps_solution, loads_instance, loads_solution


def same_instance(a, b):
    return (
        a.n_tasks == b.n_tasks
        and a.n_resources == b.n_resources
        and a.assignments == b.assignments
        and a.capacities == b.capacities
        and (a.name, a.application, a.scale, a.oracle_name) == (b.name, b.application, b.scale, b.oracle_name)
    )


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_instance_round_trip(seed):
    inst = random_instance(seed)
    text = dumps_instance(inst)
    back = loads_instance(text)
    assert same_instance(inst, back)
    assert dumps_instance(back) == text


def test_comments_and_blank_lines_are_ignored(e1):
    text = "# header comment\n\n" + dumps_instance(e1).replace("tasks 2", "tasks 2\n# inline")
    assert same_instance(loads_instance(text), e1)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "gspp 2\n",
        "gspp 1\nname x\nresources 1\n",
        "gspp 1\ntasks 1\nresources 1\na 0 0 x 0 fp= cap= label=\n",
        "gspp 1\ntasks 1\nresources 1\nbogus 1\n",
        "gspp 1\ntasks 1\nresources 1\na 0 0 1 0 fp=0 cap=\n",
    ],
)
def test_malformed_instance_text(text):
    with pytest.raises(FormatError):
        loads_instance(text)


def test_solution_round_trip():
    rec = SolutionRecord("x", "optimal", 21, True, {0: 0, 2: 5, 1: 3}, {0: 10, 1: 13, 2: 15})
    text = dumps_solution(rec)
    assert loads_solution(text) == rec
    assert text.splitlines()[-3:] == ["t 0 0 10", "t 1 3 13", "t 2 5 15"]


def test_empty_solution_round_trip():
    rec = SolutionRecord("x", "infeasible", None, False, {}, {})
    assert loads_solution(dumps_solution(rec)) == rec

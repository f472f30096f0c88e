"""Two tiny hand-checkable instances, used by tests, docs and the CLI smoke run."""

from __future__ import annotations

from .core import Assignment, Instance


def two_tasks() -> Instance:
    """Two tasks sharing resources 0 and 1; optimum 12, trivial bound 9."""
    a = [
        Assignment(0, 0, 5, {0}, label="a11"),
        Assignment(1, 0, 8, {1}, label="a12"),
        Assignment(2, 1, 4, {0}, label="a21"),
        Assignment(3, 1, 9, {1}, label="a22"),
    ]
    return Instance(2, 2, tuple(a), name="two-tasks")


def three_tasks() -> Instance:
    """Three tasks whose cheap options all want resource 0; optimum 21."""
    a = [
        Assignment(0, 0, 1, {0}, label="a"),
        Assignment(1, 0, 10, {1}, label="b"),
        Assignment(2, 1, 2, {0}, label="c"),
        Assignment(3, 1, 10, {2}, label="d"),
        Assignment(4, 2, 3, {0}, label="e"),
        Assignment(5, 2, 10, {3}, label="f"),
    ]
    return Instance(3, 4, tuple(a), name="three-tasks")

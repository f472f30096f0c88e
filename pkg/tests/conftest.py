from __future__ import annotations

import pytest

from gspp.samples import three_tasks, two_tasks


@pytest.fixture
def e1():
    return two_tasks()


@pytest.fixture
def e2():
    return three_tasks()

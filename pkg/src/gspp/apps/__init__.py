"""Instance builders for concrete applications."""

from .bacap import BacapParams, enumerate_bacap, generate_bacap, random_bacap_params
from .crew import CrewInstance, Duty, crew_lb2, crew_optimum
from .params import parse_params, read_params
from .scheduling import SchedParams, best_schedule_cost, enumerate_scheduling, random_sched_params

__all__ = [
    "BacapParams",
    "CrewInstance",
    "Duty",
    "SchedParams",
    "best_schedule_cost",
    "crew_lb2",
    "crew_optimum",
    "enumerate_bacap",
    "enumerate_scheduling",
    "generate_bacap",
    "parse_params",
    "random_bacap_params",
    "random_sched_params",
    "read_params",
]

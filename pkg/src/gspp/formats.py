"""Text formats for instances and solutions.

Instance file, version 1 (one record per line, ``#`` starts a comment)::

    gspp 1
    name <rest of line>
    application <token>
    scale <int, power of ten>
    tasks <n>
    resources <R>
    oracle <registered name>          (optional)
    capacity <id> <capacity>          (one per capacitated resource)
    a <id> <task> <cost> <source> fp=<r,r,...> cap=<r:u,...> label=<token>

Costs are the scaled integers.  The writer always emits every field in the
order above, so ``write(read(text)) == text`` for any file it produced.

Solution file, version 1::

    gspp-solution 1
    instance <name>
    status <token>
    cost <scaled int or empty>
    feasible <0|1>
    t <task> <assignment id> <source id>
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import Assignment, CapacitatedResource, Instance
from .errors import FormatError

FORMAT_VERSION = 1


def _check_token(value: str, what: str) -> None:
    if not value or any(ch.isspace() for ch in value):
        raise FormatError(f"{what} {value!r} must be a non-empty token without whitespace")


def dumps_instance(inst: Instance) -> str:
    _check_token(inst.application, "application")
    if "\n" in inst.name:
        raise FormatError("instance name must be a single line")
    out = [
        f"gspp {FORMAT_VERSION}",
        f"name {inst.name}",
        f"application {inst.application}",
        f"scale {inst.scale}",
        f"tasks {inst.n_tasks}",
        f"resources {inst.n_resources}",
    ]
    if inst.oracle_name:
        _check_token(inst.oracle_name, "oracle")
        out.append(f"oracle {inst.oracle_name}")
    for c in inst.capacities:
        out.append(f"capacity {c.id} {c.capacity}")
    for a in inst.assignments:
        if a.label:
            _check_token(a.label, "label")
        fp = ",".join(str(r) for r in sorted(a.footprint))
        cap = ",".join(f"{r}:{u}" for r, u in a.cap_usage)
        out.append(f"a {a.id} {a.task} {a.cost} {a.source} fp={fp} cap={cap} label={a.label}")
    return "\n".join(out) + "\n"


def loads_instance(text: str) -> Instance:
    header: dict[str, str] = {}
    caps: list[CapacitatedResource] = []
    assignments: list[Assignment] = []
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0].split() != ["gspp", str(FORMAT_VERSION)]:
        raise FormatError(f"missing 'gspp {FORMAT_VERSION}' header")
    for lineno, line in enumerate(lines[1:], start=2):
        key, _, rest = line.partition(" ")
        try:
            if key == "a":
                parts = rest.split()
                if len(parts) != 7:
                    raise ValueError("expected 7 fields")
                aid, task, cost, source = (int(x) for x in parts[:4])
                fields = {}
                for tok in parts[4:]:
                    k, eq, v = tok.partition("=")
                    if not eq:
                        raise ValueError(f"bad field {tok!r}")
                    fields[k] = v
                fp = frozenset(int(r) for r in fields["fp"].split(",") if r)
                cu = tuple(
                    (int(r), int(u))
                    for r, u in (p.split(":") for p in fields["cap"].split(",") if p)
                )
                assignments.append(Assignment(aid, task, cost, fp, cu, fields["label"], source))
            elif key == "capacity":
                cid, cap = (int(x) for x in rest.split())
                caps.append(CapacitatedResource(cid, cap))
            elif key in ("name", "application", "scale", "tasks", "resources", "oracle"):
                header[key] = rest if key == "name" else rest.strip()
            else:
                raise ValueError(f"unknown record {key!r}")
        except (ValueError, KeyError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    try:
        return Instance(
            n_tasks=int(header["tasks"]),
            n_resources=int(header["resources"]),
            assignments=tuple(assignments),
            capacities=tuple(caps),
            name=header.get("name", "instance"),
            application=header.get("application", "generic"),
            scale=int(header.get("scale", "1")),
            oracle_name=header.get("oracle", ""),
        )
    except KeyError as exc:
        raise FormatError(f"missing header field {exc}") from exc


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst))


def read_instance(path: str | Path) -> Instance:
    return loads_instance(Path(path).read_text())


@dataclass
class SolutionRecord:
    instance: str
    status: str
    cost: int | None
    feasible: bool
    chosen: dict[int, int]
    sources: dict[int, int]


def dumps_solution(rec: SolutionRecord) -> str:
    _check_token(rec.status, "status")
    out = [
        f"gspp-solution {FORMAT_VERSION}",
        f"instance {rec.instance}",
        f"status {rec.status}",
        f"cost {'' if rec.cost is None else rec.cost}".rstrip(),
        f"feasible {int(rec.feasible)}",
    ]
    for task in sorted(rec.chosen):
        out.append(f"t {task} {rec.chosen[task]} {rec.sources.get(task, rec.chosen[task])}")
    return "\n".join(out) + "\n"


def loads_solution(text: str) -> SolutionRecord:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split() != ["gspp-solution", str(FORMAT_VERSION)]:
        raise FormatError("missing solution header")
    rec = SolutionRecord("", "", None, False, {}, {})
    for line in lines[1:]:
        key, _, rest = line.partition(" ")
        if key == "instance":
            rec.instance = rest
        elif key == "status":
            rec.status = rest.strip()
        elif key == "cost":
            rec.cost = int(rest) if rest.strip() else None
        elif key == "feasible":
            rec.feasible = rest.strip() == "1"
        elif key == "t":
            task, aid, src = (int(x) for x in rest.split())
            rec.chosen[task] = aid
            rec.sources[task] = src
        else:
            raise FormatError(f"unknown solution record {key!r}")
    return rec

"""Key-value parameter files for the generators.

One ``key = value`` pair per line, ``#`` comments, blank lines ignored.
Per-item lists are comma separated; a list of sets uses ``;`` between items
and ``,`` inside (``1,2;3`` is ``[{1, 2}, {3}]``).
"""

from __future__ import annotations

from pathlib import Path

from ..errors import FormatError


def parse_params(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise FormatError(f"line {lineno}: expected 'key = value'")
        out[key.strip()] = value.strip()
    return out


def dump_params(items: list[tuple[str, object]]) -> str:
    lines = []
    for key, value in items:
        if isinstance(value, (list, tuple)):
            if value and isinstance(value[0], (list, tuple, set, frozenset)):
                value = ";".join(",".join(str(x) for x in sorted(v)) for v in value)
            else:
                value = ",".join(str(x) for x in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def read_params(path: str | Path) -> dict[str, str]:
    return parse_params(Path(path).read_text())


def get_int(d: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in d:
        if default is None:
            raise FormatError(f"missing parameter {key!r}")
        return default
    try:
        return int(d[key])
    except ValueError:
        raise FormatError(f"parameter {key!r} must be an integer, got {d[key]!r}") from None


def get_ints(d: dict[str, str], key: str, default: list[int] | None = None) -> list[int]:
    if key not in d:
        if default is None:
            raise FormatError(f"missing parameter {key!r}")
        return list(default)
    try:
        return [int(x) for x in d[key].split(",") if x.strip()]
    except ValueError:
        raise FormatError(f"parameter {key!r} must be a comma-separated integer list") from None


def get_int_sets(d: dict[str, str], key: str) -> list[list[int]]:
    if key not in d:
        raise FormatError(f"missing parameter {key!r}")
    try:
        return [[int(x) for x in part.split(",") if x.strip()] for part in d[key].split(";")]
    except ValueError:
        raise FormatError(f"parameter {key!r} must be ';'-separated integer lists") from None

"""CSV run reports and figures.

Every command that reports results writes rows with the same fixed header
(``REPORT_FIELDS``).  Costs are written as exact decimals on the instance's
scale; wall-clock columns are left empty unless timings are requested, so
that repeated runs produce identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable

from .core import format_cost, parse_cost

REPORT_FIELDS = (
    "instance",
    "command",
    "tasks",
    "vars",
    "scale",
    "trivial",
    "lb1",
    "lb2",
    "z",
    "z_bar",
    "gap_pct",
    "gap_ref",
    "kept_pct",
    "sigma",
    "mu",
    "seed",
    "status",
    "nodes",
    "t_rank",
    "t_total",
)

_COSTS = ("trivial", "lb1", "lb2", "z", "z_bar")
_INTS = ("tasks", "vars", "scale", "mu", "seed", "nodes")
_FLOATS = ("gap_pct", "kept_pct", "sigma", "t_rank", "t_total")


@dataclass
class RunReport:
    instance: str
    command: str
    tasks: int
    vars: int
    scale: int = 1
    trivial: int | None = None
    lb1: int | None = None
    lb2: int | None = None
    z: int | None = None  # proven optimum
    z_bar: int | None = None  # heuristic or best found cost
    gap_pct: float | None = None
    gap_ref: str = ""  # "opt" or "lb2"
    kept_pct: float | None = None
    sigma: float | None = None
    mu: int | None = None
    seed: int | None = None
    status: str = ""
    nodes: int | None = None
    t_rank: float | None = None
    t_total: float | None = None

    def set_gap(self) -> None:
        """Gap of ``z_bar`` against the optimum when known, else against LB2."""
        self.gap_pct, self.gap_ref = None, ""
        if self.z_bar is None:
            return
        ref, name = (self.z, "opt") if self.z is not None else (self.lb2, "lb2")
        if ref is None:
            return
        self.gap_ref = name
        self.gap_pct = 0.0 if ref == 0 else 100.0 * (self.z_bar - ref) / ref

    def bounds_ordered(self) -> bool:
        vals = [v for v in (self.trivial, self.lb1, self.lb2) if v is not None]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_row(self) -> dict[str, str]:
        out = {}
        for f in REPORT_FIELDS:
            v = getattr(self, f)
            if v is None:
                out[f] = ""
            elif f in _COSTS:
                out[f] = format_cost(v, self.scale)
            elif f in _FLOATS:
                out[f] = repr(float(v))
            else:
                out[f] = str(v)
        return out

    @classmethod
    def from_row(cls, row: dict[str, str]) -> RunReport:
        scale = int(row["scale"]) if row.get("scale") else 1
        kw: dict[str, object] = {}
        for f in fields(cls):
            s = row.get(f.name, "")
            if s == "":
                kw[f.name] = None if f.name not in ("instance", "command", "gap_ref", "status") else ""
            elif f.name in _COSTS:
                kw[f.name] = parse_cost(s, scale)
            elif f.name in _INTS:
                kw[f.name] = int(s)
            elif f.name in _FLOATS:
                kw[f.name] = float(s)
            else:
                kw[f.name] = s
        kw["scale"] = scale
        return cls(**kw)  # type: ignore[arg-type]


def reports_to_csv(reports: Iterable[RunReport], header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    if header:
        w.writeheader()
    for r in reports:
        w.writerow(r.to_row())
    return buf.getvalue()


def reports_from_csv(text: str) -> list[RunReport]:
    return [RunReport.from_row(row) for row in csv.DictReader(io.StringIO(text))]


def strip_timings(r: RunReport) -> RunReport:
    d = asdict(r)
    d["t_rank"] = d["t_total"] = None
    return RunReport(**d)


# -------------------------------------------------------------------- figures


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str | Path) -> None:
    fig.savefig(path, dpi=100, metadata={"Software": None})


def plot_bounds(reports: list[RunReport], path: str | Path) -> None:
    """Grouped bars of the trivial, conflict and pair bounds per instance."""
    plt = _pyplot()
    names = [r.instance for r in reports]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(names) + 2), 3.5))
    width = 0.27
    for off, key, label in ((-1, "trivial", "trivial"), (0, "lb1", "LB1"), (1, "lb2", "LB2")):
        vals = [(getattr(r, key) or 0) / r.scale for r in reports]
        ax.bar([x + off * width for x in range(len(names))], vals, width, label=label)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_sweep(reports: list[RunReport], path: str | Path) -> None:
    """Mean gap and mean kept share for every (sigma, mu) configuration."""
    plt = _pyplot()
    sigmas = sorted({r.sigma for r in reports if r.sigma is not None})
    mus = sorted({r.mu for r in reports if r.mu is not None})
    gap = [[0.0] * len(mus) for _ in sigmas]
    kept = [[0.0] * len(mus) for _ in sigmas]
    for a, s in enumerate(sigmas):
        for b, m in enumerate(mus):
            rows = [r for r in reports if r.sigma == s and r.mu == m]
            gaps = [r.gap_pct for r in rows if r.gap_pct is not None]
            gap[a][b] = sum(gaps) / len(gaps) if gaps else float("nan")
            kp = [r.kept_pct for r in rows if r.kept_pct is not None]
            kept[a][b] = sum(kp) / len(kp) if kp else float("nan")
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2))
    for ax, data, title in ((axes[0], gap, "mean gap (%)"), (axes[1], kept, "mean kept (%)")):
        im = ax.imshow(data, cmap="viridis", aspect="auto")
        ax.set_xticks(range(len(mus)))
        ax.set_xticklabels([str(m) for m in mus])
        ax.set_yticks(range(len(sigmas)))
        ax.set_yticklabels([f"{s:g}" for s in sigmas])
        ax.set_xlabel("mu")
        ax.set_ylabel("sigma")
        ax.set_title(title, fontsize=9)
        for a in range(len(sigmas)):
            for b in range(len(mus)):
                ax.text(b, a, f"{data[a][b]:.1f}", ha="center", va="center", color="w", fontsize=7)
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)

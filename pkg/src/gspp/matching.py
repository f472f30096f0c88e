"""Maximum-weight matching on general simple graphs.

Weights are nonnegative integers on the same fixed-point scale as
instance costs, so every bound built on top of a matching is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._blossom import mwm_kernel
from .errors import ContractError, FormatError, SizeError

# Keeps every blossom dual comfortably inside int64.
MAX_WEIGHT = 2**56

BRUTE_FORCE_MAX_VERTICES = 14


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph with vertices ``0..n-1``.

    Edges are stored normalised as ``(u, v, w)`` with ``u < v``.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> WeightedGraph:
        norm = []
        for u, v, w in edges:
            if u > v:
                u, v = v, u
            norm.append((int(u), int(v), w))
        g = cls(int(n), tuple(norm))
        g.check()
        return g

    def check(self) -> None:
        """Raise :class:`ContractError` unless the graph is valid."""
        if self.n < 0:
            raise ContractError("negative vertex count")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ContractError(f"edge ({u},{v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ContractError(f"self-loop at vertex {u}")
            if u > v:
                raise ContractError(f"edge ({u},{v}) is not normalised (u < v)")
            if (u, v) in seen:
                raise ContractError(f"parallel edge ({u},{v})")
            seen.add((u, v))
            if not isinstance(w, (int, np.integer)) or isinstance(w, bool):
                raise ContractError(f"edge ({u},{v}) weight {w!r} is not an integer")
            if w < 0:
                raise ContractError(f"edge ({u},{v}) has negative weight {w}")
            if w > MAX_WEIGHT:
                raise ContractError(f"edge ({u},{v}) weight exceeds {MAX_WEIGHT}")

    def weight(self, u: int, v: int) -> int | None:
        if u > v:
            u, v = v, u
        for a, b, w in self.edges:
            if a == u and b == v:
                return w
        return None

    def with_edge(self, u: int, v: int, w: int) -> WeightedGraph:
        return WeightedGraph.from_edges(self.n, list(self.edges) + [(u, v, w)])

    def scaled(self, factor: int) -> WeightedGraph:
        return WeightedGraph(self.n, tuple((u, v, w * factor) for u, v, w in self.edges))


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int, int], ...]
    weight: int

    @property
    def mate(self) -> dict[int, int]:
        out = {}
        for u, v, _ in self.edges:
            out[u] = v
            out[v] = u
        return out

    def is_valid_for(self, g: WeightedGraph) -> bool:
        present = {(u, v): w for u, v, w in g.edges}
        used: set[int] = set()
        total = 0
        for u, v, w in self.edges:
            if present.get((u, v)) != w or u in used or v in used:
                return False
            used.update((u, v))
            total += w
        return total == self.weight


def graph_arrays(g: WeightedGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = len(g.edges)
    eu = np.empty(m, np.int64)
    ev = np.empty(m, np.int64)
    ew = np.empty(m, np.int64)
    for k, (u, v, w) in enumerate(g.edges):
        eu[k] = u
        ev[k] = v
        ew[k] = w
    return eu, ev, ew


def max_weight_matching(g: WeightedGraph) -> Matching:
    """Return a maximum-weight (not necessarily perfect) matching of ``g``.

    Which optimal matching comes back when several tie is unspecified; only
    the weight is meaningful to callers.

    Raises:
        ContractError: if ``g`` has self-loops, parallel edges, or weights
            that are negative, non-integral or too large.
    """
    g.check()
    if not g.edges:
        return Matching((), 0)
    eu, ev, ew = graph_arrays(g)
    mate = mwm_kernel(g.n, eu, ev, ew)
    chosen = tuple(e for e in g.edges if mate[e[0]] == e[1])
    return Matching(chosen, sum(w for _, _, w in chosen))


def brute_force_matching(g: WeightedGraph) -> int:
    """Maximum matching weight by exhaustive search (test oracle, ``n <= 14``).

    Each vertex is either left unmatched or paired with a later neighbour;
    the remaining-vertex set is memoised, so every matching is considered
    exactly once per distinct sub-problem.
    """
    g.check()
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise SizeError(f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {g.n}")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))

    @lru_cache(maxsize=None)
    def best(remaining: int) -> int:
        if remaining == 0:
            return 0
        v = (remaining & -remaining).bit_length() - 1
        rest = remaining & ~(1 << v)
        value = best(rest)
        for u, w in adj[v]:
            if rest >> u & 1:
                value = max(value, w + best(rest & ~(1 << u)))
        return value

    return best((1 << g.n) - 1)


def dump_edge_list(g: WeightedGraph) -> str:
    """Plain ``u v weight`` lines, preceded by a ``# n <count>`` header."""
    lines = [f"# n {g.n}"]
    lines.extend(f"{u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def load_edge_list(text: str) -> WeightedGraph:
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "n":
                n = int(parts[1])
            continue
        try:
            u, v, w = (int(x) for x in line.split())
        except ValueError as exc:
            raise FormatError(f"bad edge line: {raw!r}") from exc
        edges.append((u, v, w))
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return WeightedGraph.from_edges(n, edges)

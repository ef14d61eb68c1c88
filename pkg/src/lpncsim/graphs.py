"""Simple undirected graphs, edge-list files, and random regular graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = [
    "Graph",
    "parse_edge_list",
    "format_edge_list",
    "read_edge_list",
    "write_edge_list",
    "random_regular_graph",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: no self-loops, no duplicate edges.

    Edges are normalized to sorted pairs and stored in sorted order, so two
    graphs with the same edge set compare equal.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be >= 0")
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) references invalid vertices")
            normalized.append((min(u, v), max(u, v)))
        normalized.sort()
        for a, b in zip(normalized, normalized[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        degs = [0] * self.vertex_count
        for u, v in self.edges:
            degs[u] += 1
            degs[v] += 1
        return degs

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def regularity(self) -> int | None:
        """Common vertex degree k if the graph is k-regular, else None."""
        degs = self.degrees()
        if not degs:
            return None
        k = degs[0]
        return k if all(d == k for d in degs) else None

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)


def parse_edge_list(text: str, vertex_count: int | None = None) -> Graph:
    """Parse a plain-text edge list, one ``u v`` pair per line, 0-indexed.

    Blank lines and lines starting with ``#`` are skipped.  The vertex count
    defaults to one past the largest index seen.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        top = max(top, u, v)
        edges.append((u, v))
    n = vertex_count if vertex_count is not None else top + 1
    return Graph(max(n, 0), tuple(edges))


def format_edge_list(graph: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in graph.edges)


def read_edge_list(path: str, vertex_count: int | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), vertex_count)


def write_edge_list(graph: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(graph))


def random_regular_graph(n: int, k: int, seed: int, max_tries: int = 2000) -> Graph:
    """Random k-regular simple graph on n vertices via the pairing model.

    All n*k stubs are shuffled and paired; a draw producing a self-loop or a
    duplicate edge is rejected wholesale and retried.  Deterministic per seed.
    """
    if n * k % 2 != 0:
        raise ValueError(f"n*k must be even, got n={n}, k={k}")
    if k < 0 or k >= n:
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    rng = random.Random(seed)
    stubs_template = [v for v in range(n) for _ in range(k)]
    for _ in range(max_tries):
        stubs = stubs_template[:]
        rng.shuffle(stubs)
        seen = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (min(u, v), max(u, v))
            if key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            return Graph(n, tuple(seen))
    raise RuntimeError(
        f"pairing model failed to produce a simple {k}-regular graph on "
        f"{n} vertices within {max_tries} tries"
    )

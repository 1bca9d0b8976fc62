"""Unweighted undirected multigraphs with stable integer edge identities.

The graph file format is line oriented: the first data line is ``n m``,
followed by exactly ``m`` lines ``u v`` with 0-based endpoints.  Lines that
are blank or start with ``#`` are ignored.  Edge ids are assigned 1..m in
file order; parallel edges are first-class, self-loops are rejected.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

INF = math.inf


class GraphParseError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    """Immutable multigraph: ``n`` nodes, edges as (edge_id, u, v) triples."""

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        seen: set[int] = set()
        for eid, u, v in self.edges:
            if eid in seen:
                raise ValueError(f"duplicate edge id {eid}")
            seen.add(eid)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {eid}: endpoint out of range")
            if u == v:
                raise ValueError(f"edge {eid}: self-loop")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def endpoint_map(self) -> dict[int, tuple[int, int]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node: (edge_id, neighbor) entries, ascending edge id.

        Parallel edges appear as distinct entries.
        """
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, u, v in self.edges:
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        return tuple(tuple(sorted(entries)) for entries in adj)

    @cached_property
    def neighbor_edges(self) -> tuple[dict[int, tuple[int, ...]], ...]:
        """Per node: neighbor -> ascending tuple of connecting edge ids."""
        out: list[dict[int, list[int]]] = [{} for _ in range(self.n)]
        for v in range(self.n):
            for eid, w in self.adjacency[v]:
                out[v].setdefault(w, []).append(eid)
        return tuple(
            {w: tuple(eids) for w, eids in sorted(d.items())} for d in out
        )

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.endpoint_map[eid]

    def other_endpoint(self, eid: int, v: int) -> int:
        u, w = self.endpoint_map[eid]
        if v == u:
            return w
        if v == w:
            return u
        raise ValueError(f"node {v} not an endpoint of edge {eid}")

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    @cached_property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(eid for eid, _, _ in self.edges)

    def bfs_distances(
        self,
        source: int,
        banned_edges: frozenset[int] | set[int] = frozenset(),
        banned_vertices: frozenset[int] | set[int] = frozenset(),
    ) -> dict[int, int]:
        """Hop distances from ``source``, skipping banned edges/vertices."""
        if source in banned_vertices:
            return {}
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for eid, w in self.adjacency[v]:
                if eid in banned_edges or w in banned_vertices or w in dist:
                    continue
                dist[w] = dist[v] + 1
                queue.append(w)
        return dist

    def eccentricity(self, source: int) -> int | float:
        dist = self.bfs_distances(source)
        if len(dist) < self.n:
            return INF
        return max(dist.values(), default=0)

    @cached_property
    def diameter(self) -> int:
        """Largest finite hop distance over all node pairs.

        Disconnected graphs report the max within components, so downstream
        depth caps stay finite.
        """
        best = 0
        for v in range(self.n):
            dist = self.bfs_distances(v)
            best = max(best, max(dist.values(), default=0))
        return best

    @cached_property
    def is_connected(self) -> bool:
        return len(self.bfs_distances(0)) == self.n

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps: list[list[int]] = []
        for v in range(self.n):
            if v in seen:
                continue
            comp = sorted(self.bfs_distances(v))
            seen.update(comp)
            comps.append(comp)
        return comps

    def subgraph_edges(self, edge_ids: Iterable[int]) -> "Multigraph":
        """Same node set, edges restricted to ``edge_ids`` (ids kept)."""
        keep = frozenset(edge_ids)
        return Multigraph(self.n, tuple(e for e in self.edges if e[0] in keep))


@dataclass(frozen=True)
class FaultSet:
    """A set of failed edges or failed vertices handed to an algorithm."""

    kind: str  # "edges" | "vertices"
    members: frozenset[int]

    def __post_init__(self) -> None:
        if self.kind not in ("edges", "vertices"):
            raise ValueError(f"unknown fault kind {self.kind!r}")

    @classmethod
    def edges(cls, members: Iterable[int]) -> "FaultSet":
        return cls("edges", frozenset(members))

    @classmethod
    def vertices(cls, members: Iterable[int]) -> "FaultSet":
        return cls("vertices", frozenset(members))

    def validate(self, g: Multigraph) -> None:
        if self.kind == "edges":
            missing = self.members - g.edge_ids
        else:
            missing = {v for v in self.members if not 0 <= v < g.n}
        if missing:
            raise ValueError(f"faulty {self.kind} not in graph: {sorted(missing)}")


def _data_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_graph(text: str) -> Multigraph:
    lines = _data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphParseError("empty graph file") from None
    parts = header.split()
    if len(parts) != 2:
        raise GraphParseError(f"line {lineno}: expected 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"line {lineno}: expected 'n m', got {header!r}") from None
    if n < 1 or m < 0:
        raise GraphParseError(f"line {lineno}: invalid sizes n={n} m={m}")

    edges: list[tuple[int, int, int]] = []
    for lineno, line in lines:
        if len(edges) == m:
            raise GraphParseError(f"line {lineno}: more than {m} edges")
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"line {lineno}: endpoint out of range")
        if u == v:
            raise GraphParseError(f"self-loop at line {lineno}")
        edges.append((len(edges) + 1, u, v))
    if len(edges) != m:
        raise GraphParseError(f"expected {m} edges, found {len(edges)}")
    return Multigraph(n, tuple(edges))


def format_graph(g: Multigraph) -> str:
    lines = [f"{g.n} {g.m}"]
    for _, u, v in g.edges:
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Multigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def save_graph(g: Multigraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))


def from_edge_list(n: int, pairs: Sequence[tuple[int, int]]) -> Multigraph:
    """Convenience constructor: ids 1..len(pairs) in list order."""
    return Multigraph(n, tuple((i + 1, u, v) for i, (u, v) in enumerate(pairs)))

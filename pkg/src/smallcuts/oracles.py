"""Brute-force ground truth for cuts, connectivity, and faulty distances.

Two independent methods cross-check each other: cut values come from
unit-capacity max-flow (parallel edges collapsed into capacities), witness
lists come from exhaustive subset enumeration.  Everything here is a pure
function of its inputs and deliberately ignorant of the simulator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from collections import deque

from .graphs import INF, FaultSet, Multigraph

DEFAULT_WITNESS_CAP = 4


@dataclass(frozen=True)
class OracleCut:
    """Exact cut value plus the complete list of minimum witnesses.

    ``truncated`` means the true value exceeds ``cap``; ``value`` is then
    reported as ``cap + 1`` and ``witnesses`` is empty.  ``adjacent`` flags
    vertex-cut queries on adjacent pairs, which have no finite cut.
    """

    value: int
    witnesses: tuple[frozenset[int], ...] = ()
    truncated: bool = False
    adjacent: bool = False

    def describe(self) -> str:
        if self.adjacent:
            return f">= {self.value} (adjacent)"
        if self.truncated:
            return f">= {self.value}"
        return str(self.value)


def _capacity_adjacency(g: Multigraph, banned: frozenset[int]) -> list[dict[int, int]]:
    cap: list[dict[int, int]] = [{} for _ in range(g.n)]
    for eid, u, v in g.edges:
        if eid in banned:
            continue
        cap[u][v] = cap[u].get(v, 0) + 1
        cap[v][u] = cap[v].get(u, 0) + 1
    return cap


def max_flow_value(
    g: Multigraph,
    s: int,
    t: int,
    limit: int | None = None,
    banned_edges: frozenset[int] = frozenset(),
) -> int:
    """s-t max flow with unit edge capacities (= edge-disjoint path count).

    Parallel edges collapse into integer capacities; BFS augmenting paths
    push the path bottleneck.  Stops once the flow reaches ``limit``.
    """
    if s == t:
        raise ValueError("max flow needs distinct endpoints")
    residual = _capacity_adjacency(g, banned_edges)
    flow = 0
    while limit is None or flow < limit:
        parent: dict[int, int] = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            v = queue.popleft()
            for w in sorted(residual[v]):
                if residual[v][w] > 0 and w not in parent:
                    parent[w] = v
                    queue.append(w)
        if t not in parent:
            break
        path = [t]
        while path[-1] != s:
            path.append(parent[path[-1]])
        path.reverse()
        bottleneck = min(residual[path[i]][path[i + 1]] for i in range(len(path) - 1))
        if limit is not None:
            bottleneck = min(bottleneck, limit - flow)
        for i in range(len(path) - 1):
            v, w = path[i], path[i + 1]
            residual[v][w] -= bottleneck
            residual[w][v] = residual[w].get(v, 0) + bottleneck
        flow += bottleneck
    return flow


def is_st_edge_cut(g: Multigraph, s: int, t: int, removed: frozenset[int]) -> bool:
    return t not in g.bfs_distances(s, banned_edges=removed)


def is_global_edge_cut(g: Multigraph, removed: frozenset[int]) -> bool:
    return len(g.bfs_distances(0, banned_edges=removed)) < g.n


def _is_vertex_separator(g: Multigraph, s: int, t: int, removed: frozenset[int]) -> bool:
    return t not in g.bfs_distances(s, banned_vertices=removed)


def _minimum_subsets(
    universe: list[int],
    size: int,
    disconnects,
) -> tuple[frozenset[int], ...]:
    hits = []
    for combo in itertools.combinations(universe, size):
        cand = frozenset(combo)
        if disconnects(cand):
            hits.append(cand)
    return tuple(hits)


def min_cut_oracle(
    g: Multigraph,
    s: int | None = None,
    t: int | None = None,
    cap: int = DEFAULT_WITNESS_CAP,
) -> OracleCut:
    """Exact edge connectivity (s-t or global) with all minimum witnesses.

    The value comes from max-flow; witnesses of size == value come from
    exhaustive enumeration, so the two methods validate each other.  Values
    above ``cap`` are reported as truncated with no witnesses.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    if (s is None) != (t is None):
        raise ValueError("give both of s,t or neither")

    if s is not None and t is not None:
        if is_st_edge_cut(g, s, t, frozenset()):
            return OracleCut(0, (frozenset(),))
        value = max_flow_value(g, s, t, limit=cap + 1)
        if value > cap:
            return OracleCut(cap + 1, (), truncated=True)
        disconnects = lambda cand: is_st_edge_cut(g, s, t, cand)
    else:
        if not g.is_connected:
            return OracleCut(0, (frozenset(),))
        anchor = 0
        value = min(
            max_flow_value(g, anchor, v, limit=cap + 1) for v in range(1, g.n)
        )
        if value > cap:
            return OracleCut(cap + 1, (), truncated=True)
        disconnects = lambda cand: is_global_edge_cut(g, cand)

    witnesses = _minimum_subsets(sorted(g.edge_ids), value, disconnects)
    return OracleCut(value, witnesses)


def vertex_cut_oracle(
    g: Multigraph,
    s: int,
    t: int,
    cap: int = DEFAULT_WITNESS_CAP,
) -> OracleCut:
    """Minimum s-t vertex cut by exhaustive enumeration over candidates."""
    if s == t:
        raise ValueError("vertex cut needs distinct endpoints")
    if t in g.neighbor_edges[s]:
        return OracleCut(cap + 1, (), truncated=True, adjacent=True)
    candidates = [v for v in range(g.n) if v not in (s, t)]
    for size in range(0, cap + 1):
        witnesses = _minimum_subsets(
            candidates, size, lambda cand: _is_vertex_separator(g, s, t, cand)
        )
        if witnesses:
            return OracleCut(size, witnesses)
    return OracleCut(cap + 1, (), truncated=True)


def global_vertex_connectivity(g: Multigraph, cap: int = DEFAULT_WITNESS_CAP) -> OracleCut:
    """Minimum vertex cut over all non-adjacent pairs (test-side helper)."""
    best: OracleCut | None = None
    for s in range(g.n):
        for t in range(s + 1, g.n):
            if t in g.neighbor_edges[s]:
                continue
            cut = vertex_cut_oracle(g, s, t, cap=cap)
            if best is None or (not cut.truncated and cut.value < best.value):
                best = cut
            elif best.truncated and not cut.truncated:
                best = cut
    if best is None:
        return OracleCut(cap + 1, (), truncated=True, adjacent=True)
    return best


def dist_under_faults(g: Multigraph, u: int, v: int, faults: FaultSet) -> int | float:
    """BFS hop distance with the fault set removed; inf when disconnected."""
    faults.validate(g)
    if faults.kind == "edges":
        dist = g.bfs_distances(u, banned_edges=faults.members)
    else:
        if u in faults.members or v in faults.members:
            return INF
        dist = g.bfs_distances(u, banned_vertices=faults.members)
    return dist.get(v, INF)


def certifies_cut(g: Multigraph, witness: frozenset[int], s: int | None = None, t: int | None = None) -> bool:
    """Offline check that removing ``witness`` disconnects (the pair or G)."""
    if s is None:
        return is_global_edge_cut(g, witness)
    assert t is not None
    return is_st_edge_cut(g, s, t, witness)

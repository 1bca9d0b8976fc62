"""Distributed building blocks: subgraph selection, truncated BFS,
root-path pipelining, edge renaming, and pipelined broadcast.

Selectors are pure predicates over edge/vertex identities that both
endpoints can evaluate from shared seeds, so membership costs zero
communication.  BFS tie-breaking is by ascending edge id, making tree paths
unique for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import rng
from .engine import Message, NodeView, Protocol, SimConfig, Transcript, run
from .graphs import Multigraph


class Selector:
    """Which edges/vertices of the base graph participate in this run."""

    def __init__(
        self,
        edge_test: Callable[[int], bool] | None = None,
        vertex_test: Callable[[int], bool] | None = None,
        label: str = "all",
    ):
        self._edge_test = edge_test
        self._vertex_test = vertex_test
        self.label = label

    def includes_vertex(self, v: int) -> bool:
        return self._vertex_test(v) if self._vertex_test else True

    def includes_edge(self, eid: int, u: int, v: int) -> bool:
        if self._vertex_test and not (self._vertex_test(u) and self._vertex_test(v)):
            return False
        return self._edge_test(eid) if self._edge_test else True

    @classmethod
    def all(cls) -> "Selector":
        return cls()

    @classmethod
    def random_edges(cls, p: float, seed: int, iteration: int) -> "Selector":
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must be in [0,1]")
        test = lambda eid: rng.unit_hash("edge", seed, iteration, eid) < p
        return cls(edge_test=test, label=f"random_edges(p={p:.6g},i={iteration})")

    @classmethod
    def random_vertices(
        cls, p: float, seed: int, iteration: int, forced: Iterable[int] = ()
    ) -> "Selector":
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must be in [0,1]")
        keep = frozenset(forced)
        test = lambda v: v in keep or rng.unit_hash("vertex", seed, iteration, v) < p
        return cls(vertex_test=test, label=f"random_vertices(p={p:.6g},i={iteration})")

    @classmethod
    def excluding_edges(cls, banned: Iterable[int]) -> "Selector":
        banned_set = frozenset(banned)
        return cls(edge_test=lambda eid: eid not in banned_set, label="exclude_edges")

    @classmethod
    def excluding_vertices(cls, banned: Iterable[int]) -> "Selector":
        banned_set = frozenset(banned)
        return cls(vertex_test=lambda v: v not in banned_set, label="exclude_vertices")

    @classmethod
    def edge_subset(cls, kept: Iterable[int]) -> "Selector":
        kept_set = frozenset(kept)
        return cls(edge_test=lambda eid: eid in kept_set, label="edge_subset")

    @classmethod
    def from_member(cls, member, rename: dict[int, int] | None = None) -> "Selector":
        """Membership from any object supporting ``in`` (e.g. a universal set).

        ``rename`` maps graph edge ids to the identifier space the member
        lives in.
        """
        if rename is None:
            test = lambda eid: eid in member
        else:
            test = lambda eid: rename[eid] in member
        return cls(edge_test=test, label="universal_member")

    def restricted(self, other: "Selector") -> "Selector":
        """Intersection of two selectors."""
        mine_e, mine_v = self._edge_test, self._vertex_test
        theirs_e, theirs_v = other._edge_test, other._vertex_test

        def edge_test(eid: int) -> bool:
            if mine_e and not mine_e(eid):
                return False
            return theirs_e(eid) if theirs_e else True

        def vertex_test(v: int) -> bool:
            if mine_v and not mine_v(v):
                return False
            return theirs_v(v) if theirs_v else True

        return Selector(edge_test, vertex_test, label=f"{self.label}&{other.label}")


def selected_edges(g: Multigraph, sel: Selector) -> list[tuple[int, int, int]]:
    return [e for e in g.edges if sel.includes_edge(*e)]


@dataclass(frozen=True)
class BfsTree:
    source: int
    depth_cap: int
    parent_edge: dict[int, int]  # node -> edge id towards source
    depth: dict[int, int]  # node -> hop distance (source included, depth 0)

    @property
    def reached(self) -> frozenset[int]:
        return frozenset(self.depth)

    def children(self, g: Multigraph) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {v: [] for v in self.depth}
        for v, eid in self.parent_edge.items():
            kids[g.other_endpoint(eid, v)].append(v)
        return {v: sorted(c) for v, c in kids.items()}

    def max_depth(self) -> int:
        return max(self.depth.values(), default=0)

    def path_edges(self, g: Multigraph, v: int) -> list[int]:
        """Edge ids along the tree path source -> v (local reconstruction)."""
        path: list[int] = []
        cur = v
        while cur != self.source:
            eid = self.parent_edge[cur]
            path.append(eid)
            cur = g.other_endpoint(eid, cur)
        path.reverse()
        return path


class _BfsProtocol(Protocol):
    """Flood JOIN tokens; depth = arrival round, parent = lowest offering edge."""

    def __init__(self, g: Multigraph, sel: Selector, source: int, depth_cap: int):
        self.g = g
        self.sel = sel
        self.source = source
        self.depth_cap = depth_cap
        self.depth: dict[int, int] = {}
        self.parent_edge: dict[int, int] = {}

    def _member_edges(self, node: NodeView) -> list[tuple[int, int]]:
        # one edge per neighbor suffices for flooding: lowest selected edge
        out = []
        for w, eids in self.g.neighbor_edges[node.id].items():
            chosen = next(
                (eid for eid in eids if self.sel.includes_edge(eid, node.id, w)), None
            )
            if chosen is not None:
                out.append((chosen, w))
        return out

    def start(self, node: NodeView) -> None:
        if node.id != self.source or not self.sel.includes_vertex(node.id):
            return
        self.depth[node.id] = 0
        if self.depth_cap > 0:
            for eid, _ in self._member_edges(node):
                node.send(eid, "join")

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        if node.id in self.depth or not inbox:
            return
        if not self.sel.includes_vertex(node.id):
            return
        offers = [m.edge_id for m in inbox if m.payload[0] == "join"]
        if not offers:
            return
        self.depth[node.id] = node.round
        self.parent_edge[node.id] = min(offers)
        if node.round < self.depth_cap:
            for eid, w in self._member_edges(node):
                if eid != self.parent_edge[node.id]:
                    node.send(eid, "join")


def truncated_bfs(
    g: Multigraph,
    sel: Selector,
    source: int,
    depth_cap: int,
    config: SimConfig | None = None,
) -> tuple[BfsTree, Transcript]:
    """BFS on the selected subgraph, exploring to ``depth_cap`` hops.

    Rounds <= depth_cap + 1.
    """
    if depth_cap < 0:
        raise ValueError("depth_cap must be >= 0")
    proto = _BfsProtocol(g, sel, source, depth_cap)
    transcript = run(g, proto, config)
    tree = BfsTree(source, depth_cap, dict(proto.parent_edge), dict(proto.depth))
    return tree, transcript


class _RootPathProtocol(Protocol):
    """Stream each node's root path downward, one edge id per round.

    A node at depth d expects d-1 prefix edges from its parent, forwards
    each the round it arrives, then appends its own parent edge one round
    later.  Children learn path lengths from their BFS depth, so no end
    markers are needed.
    """

    def __init__(self, g: Multigraph, tree: BfsTree):
        self.g = g
        self.tree = tree
        self.children = tree.children(g)
        self.paths: dict[int, list[int]] = {tree.source: []}
        self.prefix_left: dict[int, int] = {}
        self.pending_own: dict[int, bool] = {}

    def _fanout(self, node: NodeView, value: int) -> None:
        for child in self.children.get(node.id, []):
            node.send(self.tree.parent_edge[child], "path", value)

    def start(self, node: NodeView) -> None:
        depth = self.tree.depth.get(node.id)
        if depth is None:
            return
        if depth == 0:
            return
        self.paths[node.id] = []
        self.prefix_left[node.id] = depth - 1
        if depth == 1:
            # whole path is the parent edge; stream it immediately
            self.paths[node.id] = [self.tree.parent_edge[node.id]]
            self._fanout(node, self.tree.parent_edge[node.id])

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        if self.pending_own.pop(node.id, False):
            own = self.tree.parent_edge[node.id]
            self.paths[node.id].append(own)
            self._fanout(node, own)
            node.set_busy(False)
        for msg in inbox:
            if msg.payload[0] != "path":
                continue
            edge_value = msg.payload[1]
            self.paths[node.id].append(edge_value)
            self.prefix_left[node.id] -= 1
            self._fanout(node, edge_value)
            if self.prefix_left[node.id] == 0:
                # own parent edge goes out next round
                self.pending_own[node.id] = True
                node.set_busy(True)


def collect_root_paths(
    g: Multigraph, tree: BfsTree, config: SimConfig | None = None
) -> tuple[dict[int, list[int]], Transcript]:
    """Every reached node learns its full root path.

    Rounds <= 2 * max_depth + 2 under one-edge-id-per-message pipelining.
    """
    proto = _RootPathProtocol(g, tree)
    transcript = run(g, proto, config)
    return dict(proto.paths), transcript


class _ConvergecastMin(Protocol):
    """Leaves report (value, owner) minima up a tree; root learns the min.

    Nodes with nothing to report send an explicit empty marker so the
    message size stays within budget.
    """

    def __init__(self, g: Multigraph, tree: BfsTree, local: dict[int, tuple[int, int]]):
        self.g = g
        self.tree = tree
        self.children = tree.children(g)
        self.local = local  # node -> (value, owner)
        self.best: dict[int, tuple[int, int] | None] = {}
        self.waiting: dict[int, int] = {}
        self.result: tuple[int, int] | None = None

    def _report(self, node: NodeView) -> None:
        best = self.best[node.id]
        if node.id == self.tree.source:
            self.result = best
        elif best is None:
            node.send(self.tree.parent_edge[node.id], "min-none")
        else:
            node.send(self.tree.parent_edge[node.id], "min", best[0], best[1])

    def _offer(self, node_id: int, offer: tuple[int, int]) -> None:
        cur = self.best[node_id]
        if cur is None or offer < cur:
            self.best[node_id] = offer

    def start(self, node: NodeView) -> None:
        if node.id not in self.tree.depth:
            return
        self.best[node.id] = self.local.get(node.id)
        self.waiting[node.id] = len(self.children.get(node.id, []))
        if self.waiting[node.id] == 0:
            self._report(node)

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        for msg in inbox:
            if msg.payload[0] == "min":
                self._offer(node.id, (msg.payload[1], msg.payload[2]))
            elif msg.payload[0] != "min-none":
                continue
            self.waiting[node.id] -= 1
            if self.waiting[node.id] == 0:
                self._report(node)


def convergecast_min(
    g: Multigraph,
    tree: BfsTree,
    local: dict[int, tuple[int, int]],
    config: SimConfig | None = None,
) -> tuple[tuple[int, int] | None, Transcript]:
    """Minimum (value, owner) over reached nodes; None if nobody has a value.

    Rounds <= max_depth + 1.
    """
    proto = _ConvergecastMin(g, tree, local)
    transcript = run(g, proto, config)
    return proto.result, transcript


class _BroadcastProtocol(Protocol):
    """Pipelined flood of an ordered chunk list from one source."""

    def __init__(self, g: Multigraph, source: int, chunks: Sequence[int]):
        self.g = g
        self.source = source
        self.chunks = list(chunks)
        self.received: dict[int, list[int]] = {source: list(chunks)}
        self.sent_count: dict[int, int] = {}
        self.adopted_edge: dict[int, int] = {}

    def _flood_edges(self, node: NodeView) -> list[int]:
        return [
            eids[0]
            for w, eids in self.g.neighbor_edges[node.id].items()
        ]

    def start(self, node: NodeView) -> None:
        if node.id != self.source or not self.chunks:
            return
        for eid in self._flood_edges(node):
            node.send(eid, "chunk", self.chunks[0])
        self.sent_count[node.id] = 1
        node.set_busy(len(self.chunks) > 1)

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        mine = self.received.setdefault(node.id, [])
        for msg in inbox:
            if msg.payload[0] != "chunk":
                continue
            if node.id != self.source and node.id not in self.adopted_edge:
                self.adopted_edge[node.id] = msg.edge_id
                self.sent_count[node.id] = 0
            if msg.edge_id == self.adopted_edge.get(node.id):
                mine.append(msg.payload[1])
                node.set_busy(True)
        # forward one chunk per round on every non-adoption edge
        k = self.sent_count.get(node.id)
        if k is None:
            return
        if k < len(mine):
            for eid in self._flood_edges(node):
                if eid != self.adopted_edge.get(node.id):
                    node.send(eid, "chunk", mine[k])
            self.sent_count[node.id] = k + 1
        if self.sent_count[node.id] >= len(mine):
            node.set_busy(False)


def broadcast(
    g: Multigraph,
    source: int,
    chunks: Sequence[int],
    config: SimConfig | None = None,
) -> tuple[dict[int, list[int]], Transcript]:
    """All nodes learn the chunk list.  Rounds <= eccentricity + len(chunks)."""
    proto = _BroadcastProtocol(g, source, chunks)
    transcript = run(g, proto, config)
    return dict(proto.received), transcript


class _SubtreeCountProtocol(Protocol):
    """Convergecast of owned-edge counts, then prefix offsets downward."""

    def __init__(self, g: Multigraph, tree: BfsTree, owned: dict[int, list[int]]):
        self.g = g
        self.tree = tree
        self.owned = owned
        self.children = tree.children(g)
        self.subtotal: dict[int, int] = {}
        self.waiting: dict[int, int] = {}
        self.child_counts: dict[int, dict[int, int]] = {}
        self.offsets: dict[int, int] = {}

    def start(self, node: NodeView) -> None:
        if node.id not in self.tree.depth:
            return
        kids = self.children.get(node.id, [])
        self.waiting[node.id] = len(kids)
        self.child_counts[node.id] = {}
        if not kids:
            self._report(node)

    def _report(self, node: NodeView) -> None:
        total = len(self.owned.get(node.id, [])) + sum(
            self.child_counts[node.id].values()
        )
        self.subtotal[node.id] = total
        if node.id == self.tree.source:
            self._assign(node, 0)
        else:
            node.send(self.tree.parent_edge[node.id], "count", total)

    def _assign(self, node: NodeView, offset: int) -> None:
        self.offsets[node.id] = offset
        cursor = offset + len(self.owned.get(node.id, []))
        for child in self.children.get(node.id, []):
            node.send(self.tree.parent_edge[child], "offset", cursor)
            cursor += self.child_counts[node.id][child]

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        for msg in inbox:
            tag = msg.payload[0]
            if tag == "count":
                child = msg.src
                self.child_counts[node.id][child] = msg.payload[1]
                self.waiting[node.id] -= 1
                if self.waiting[node.id] == 0:
                    self._report(node)
            elif tag == "offset":
                self._assign(node, msg.payload[1])


class _OwnerAnnounce(Protocol):
    """Owners push each owned edge's new id across that edge (one round)."""

    def __init__(self, assignments: dict[int, list[tuple[int, int]]]):
        self.assignments = assignments  # owner -> [(edge_id, new_id)]

    def start(self, node: NodeView) -> None:
        for eid, new_id in self.assignments.get(node.id, []):
            node.send(eid, "newid", new_id)


def rename_edges(
    g: Multigraph, config: SimConfig | None = None
) -> tuple[dict[int, int], int, bool]:
    """Globally consistent bijection edge ids -> [1, m] in O(D) rounds.

    Each edge is owned by its lower-id endpoint; a BFS tree from the lowest
    node carries subtree counts up and prefix offsets down, then owners
    number their edges in ascending original id order and announce the new
    ids over the edges themselves.  Disconnected inputs are renamed per
    component with disjoint ranges and flagged.

    Returns (mapping, rounds, disconnected_flag).
    """
    owned: dict[int, list[int]] = {}
    for eid, u, v in g.edges:
        owned.setdefault(min(u, v), []).append(eid)
    for v in owned:
        owned[v].sort()

    mapping: dict[int, int] = {}
    rounds = 0
    components = g.components()
    base = 0
    for comp in components:
        source = comp[0]
        tree, t1 = truncated_bfs(g, Selector.all(), source, g.n, config)
        proto = _SubtreeCountProtocol(g, tree, owned)
        t2 = run(g, proto, config)
        assignments: dict[int, list[tuple[int, int]]] = {}
        for v in comp:
            ids = owned.get(v, [])
            off = proto.offsets.get(v, 0)
            for i, eid in enumerate(ids):
                mapping[eid] = base + off + i + 1
                assignments.setdefault(v, []).append((eid, mapping[eid]))
        t3 = run(g, _OwnerAnnounce(assignments), config)
        rounds += t1.rounds + t2.rounds + t3.rounds
        base += sum(len(owned.get(v, [])) for v in comp)
    return mapping, rounds, len(components) > 1

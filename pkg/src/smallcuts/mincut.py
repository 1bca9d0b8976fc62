"""Exact small cuts: distributed cut verification, the sampling-based
randomized min-cut (edge and vertex variants), and the per-node local cut
machinery they share.

Structure of a run: a fixed source floods truncated BFS trees over many
selected subgraphs; every node accumulates the union of its tree paths as a
personal source-to-node certificate, locally solves the cut on that
certificate, and the smallest verified answer wins.  Any witness this
module returns has passed distributed cut verification.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .engine import SimConfig, Transcript
from .graphs import Multigraph
from .primitives import (
    Selector,
    broadcast,
    collect_root_paths,
    convergecast_min,
    truncated_bfs,
)

DETOUR_FACTOR = 3  # bounded-detour constant: dist(u,v,G-F) <= 3*lam*D


@dataclass(frozen=True)
class IterationPlan:
    """How many sampling experiments to run and how deep to explore."""

    iterations: int
    depth_cap: int
    p: float
    paper_iterations: int
    kind: str  # "edges" | "vertices"

    @staticmethod
    def _paper_count(cap: int, lam: int, n: int) -> int:
        return max(1, math.ceil(cap ** (2 * lam) * math.log(max(2, n))))

    @classmethod
    def edges(
        cls,
        g: Multigraph,
        lam: int,
        scale: float = 1.0,
        max_iterations: int | None = None,
    ) -> "IterationPlan":
        cap = DETOUR_FACTOR * lam * max(1, g.diameter)
        paper = cls._paper_count(cap, lam, g.n)
        count = max(1, math.ceil(paper * scale))
        if max_iterations is not None:
            count = min(count, max_iterations)
        return cls(count, cap, 1.0 - 1.0 / cap, paper, "edges")

    @classmethod
    def vertices(
        cls,
        g: Multigraph,
        lam: int,
        scale: float = 1.0,
        max_iterations: int | None = None,
    ) -> "IterationPlan":
        cap = DETOUR_FACTOR * lam * max(1, g.max_degree) * max(1, g.diameter)
        paper = cls._paper_count(cap, lam, g.n)
        count = max(1, math.ceil(paper * scale))
        if max_iterations is not None:
            count = min(count, max_iterations)
        return cls(count, cap, 1.0 - 1.0 / cap, paper, "vertices")


@dataclass(frozen=True)
class StCertificate:
    """Edges a node has collected about its connection to the source."""

    owner: int
    source: int
    edges: frozenset[int]


@dataclass(frozen=True)
class CutResult:
    """Outcome of one min-cut run.

    ``value is None`` means no cut of size <= the queried bound was found
    (connectivity exceeds the bound).  Witnesses are edge ids, or node ids
    for the vertex variant, and have always passed distributed
    verification.
    """

    value: int | None
    witness: frozenset[int]
    discovered_by: int | None
    rounds: int
    iterations: int
    mode: str
    lambda_bound: int
    seed: int | None = None
    certificates: dict[int, frozenset[int]] = field(default_factory=dict, repr=False)
    note: str | None = None
    attempts: int = 0
    family: dict | None = None
    digest: str | None = None

    @property
    def exceeds_bound(self) -> bool:
        return self.value is None


class LocalGraph:
    """Unit-capacity flow over an explicit edge-id subset.

    Augmenting paths explore neighbors in ascending edge-id order, so the
    value, the witness (residual frontier), and the path decomposition are
    all deterministic.
    """

    def __init__(self, g: Multigraph, edge_ids: Iterable[int]):
        self.g = g
        self.edge_ids = sorted(set(edge_ids))
        self.adj: dict[int, list[tuple[int, int]]] = {}
        for eid in self.edge_ids:
            u, v = g.endpoints(eid)
            self.adj.setdefault(u, []).append((eid, v))
            self.adj.setdefault(v, []).append((eid, u))
        for v in self.adj:
            self.adj[v].sort()

    def nodes(self) -> set[int]:
        return set(self.adj)

    def st_cut(
        self, s: int, t: int, limit: int
    ) -> tuple[int, frozenset[int], list[list[int]]]:
        """(flow value truncated at ``limit``, witness edge set, disjoint paths).

        When the flow reaches ``limit`` the witness is empty: the true cut
        is at least ``limit``.
        """
        if s == t:
            raise ValueError("s and t must differ")
        flow: dict[int, int] = {eid: 0 for eid in self.edge_ids}  # +1 = u->v

        def residual_ok(eid: int, from_node: int) -> bool:
            u, v = self.g.endpoints(eid)
            return flow[eid] != (1 if from_node == u else -1)

        value = 0
        while value < limit:
            parent: dict[int, tuple[int, int]] = {s: (-1, s)}
            queue = deque([s])
            while queue and t not in parent:
                x = queue.popleft()
                for eid, y in self.adj.get(x, []):
                    if y not in parent and residual_ok(eid, x):
                        parent[y] = (eid, x)
                        queue.append(y)
            if t not in parent:
                break
            node = t
            while node != s:
                eid, prev = parent[node]
                u, _ = self.g.endpoints(eid)
                delta = 1 if prev == u else -1
                flow[eid] = 0 if flow[eid] == -delta else delta
                node = prev
            value += 1

        if value >= limit:
            return value, frozenset(), []

        reach = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for eid, y in self.adj.get(x, []):
                if y not in reach and residual_ok(eid, x):
                    reach.add(y)
                    queue.append(y)
        witness = frozenset(
            eid
            for eid in self.edge_ids
            if (self.g.endpoints(eid)[0] in reach) != (self.g.endpoints(eid)[1] in reach)
        )

        paths = self._decompose(s, t, flow, value)
        return value, witness, paths

    def _decompose(
        self, s: int, t: int, flow: dict[int, int], value: int
    ) -> list[list[int]]:
        used: set[int] = set()
        paths = []
        for _ in range(value):
            path = []
            node = s
            while node != t:
                for eid, y in self.adj.get(node, []):
                    if eid in used or flow[eid] == 0:
                        continue
                    u, _ = self.g.endpoints(eid)
                    direction = 1 if node == u else -1
                    if flow[eid] == direction:
                        used.add(eid)
                        path.append(eid)
                        node = y
                        break
                else:  # pragma: no cover - flow conservation guarantees progress
                    raise RuntimeError("flow decomposition stuck")
            paths.append(path)
        return paths

    def st_vertex_cut(
        self, s: int, t: int, limit: int
    ) -> tuple[int, frozenset[int], bool]:
        """(vertex flow truncated at ``limit``, witness vertex set, adjacent).

        Node-splitting reduction; adjacent pairs have no finite cut and
        come back truncated with the flag set.
        """
        if s == t:
            raise ValueError("s and t must differ")
        if any(
            {self.g.endpoints(eid)[0], self.g.endpoints(eid)[1]} == {s, t}
            for eid in self.edge_ids
        ):
            return limit, frozenset(), True

        big = 1 << 20
        cap: dict[tuple[tuple[int, int], tuple[int, int]], int] = {}
        nodes = self.nodes() | {s, t}
        for v in nodes:
            cap[((v, 0), (v, 1))] = big if v in (s, t) else 1
        for eid in self.edge_ids:
            u, v = self.g.endpoints(eid)
            cap[((u, 1), (v, 0))] = cap.get(((u, 1), (v, 0)), 0) + big
            cap[((v, 1), (u, 0))] = cap.get(((v, 1), (u, 0)), 0) + big

        adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for (a, b) in cap:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        for a in adj:
            adj[a].sort()
        residual = dict(cap)

        src, sink = (s, 1), (t, 0)
        value = 0
        while value < limit:
            parent: dict[tuple[int, int], tuple[int, int]] = {src: src}
            queue = deque([src])
            while queue and sink not in parent:
                x = queue.popleft()
                for y in adj.get(x, []):
                    if y not in parent and residual.get((x, y), 0) > 0:
                        parent[y] = x
                        queue.append(y)
            if sink not in parent:
                break
            node = sink
            while node != src:
                prev = parent[node]
                residual[(prev, node)] = residual.get((prev, node), 0) - 1
                residual[(node, prev)] = residual.get((node, prev), 0) + 1
                node = prev
            value += 1

        if value >= limit:
            return value, frozenset(), False

        reach = {src}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in adj.get(x, []):
                if y not in reach and residual.get((x, y), 0) > 0:
                    reach.add(y)
                    queue.append(y)
        witness = frozenset(
            v for v in nodes if (v, 0) in reach and (v, 1) not in reach
        )
        return value, witness, False


def local_st_cut(
    g: Multigraph, cert: StCertificate, lam: int
) -> tuple[int, frozenset[int], list[list[int]]]:
    """Exact s-t edge cut of the certificate subgraph, truncated at lam+1.

    Returns (value, witness, edge-disjoint paths).  A certificate that never
    reached the owner yields value 0 with an empty witness.
    """
    local = LocalGraph(g, cert.edges)
    if cert.source not in local.nodes() or cert.owner not in local.nodes():
        return 0, frozenset(), []
    return local.st_cut(cert.source, cert.owner, lam + 1)


@dataclass(frozen=True)
class VerifyResult:
    is_cut: bool
    rounds: int
    transcript: Transcript


def verify_cut(
    g: Multigraph,
    edge_set: Iterable[int],
    lam: int,
    config: SimConfig | None = None,
) -> VerifyResult:
    """Distributed test whether removing ``edge_set`` disconnects the graph.

    One truncated BFS to depth 3*lam*D on the complement selector; the set
    is a cut iff some node stays unreached.  Rounds <= 3*lam*D + 1.
    """
    banned = frozenset(edge_set)
    if len(banned) > lam:
        raise ValueError(f"cut candidate larger than lam={lam}")
    missing = banned - g.edge_ids
    if missing:
        raise ValueError(f"unknown edge ids {sorted(missing)}")
    cap = DETOUR_FACTOR * lam * max(1, g.diameter)
    tree, transcript = truncated_bfs(g, Selector.excluding_edges(banned), 0, cap, config)
    return VerifyResult(len(tree.reached) < g.n, transcript.rounds, transcript)


def verify_vertex_cut(
    g: Multigraph,
    vertex_set: Iterable[int],
    lam: int,
    config: SimConfig | None = None,
) -> VerifyResult:
    """Vertex analogue of ``verify_cut``; depth cap 3*lam*Delta*D."""
    banned = frozenset(vertex_set)
    if len(banned) > lam:
        raise ValueError(f"cut candidate larger than lam={lam}")
    if banned >= set(range(g.n)):
        raise ValueError("cannot remove every node")
    cap = DETOUR_FACTOR * lam * max(1, g.max_degree) * max(1, g.diameter)
    source = min(v for v in range(g.n) if v not in banned)
    tree, transcript = truncated_bfs(
        g, Selector.excluding_vertices(banned), source, cap, config
    )
    survivors = g.n - len(banned)
    return VerifyResult(len(tree.reached) < survivors, transcript.rounds, transcript)


def _grow_certificates(
    g: Multigraph,
    source: int,
    plan: IterationPlan,
    seed: int | None,
    config: SimConfig | None,
    early_exit_window: int | None,
    member_selector=None,
) -> tuple[dict[int, set[int]], int, int]:
    """Run the sampling iterations; returns (certs, rounds, iterations used)."""
    certs: dict[int, set[int]] = {v: set() for v in range(g.n)}
    rounds = 0
    stale = 0
    used = 0
    for i in range(plan.iterations):
        if member_selector is not None:
            sel = member_selector(i)
        elif plan.kind == "edges":
            sel = Selector.random_edges(plan.p, seed, i)
        else:
            sel = Selector.random_vertices(plan.p, seed, i, forced=(source,))
        tree, t1 = truncated_bfs(g, sel, source, plan.depth_cap, config)
        paths, t2 = collect_root_paths(g, tree, config)
        rounds += t1.rounds + t2.rounds
        used = i + 1
        grew = False
        for v, path in paths.items():
            before = len(certs[v])
            certs[v].update(path)
            grew = grew or len(certs[v]) != before
        if early_exit_window:
            stale = 0 if grew else stale + 1
            if stale >= early_exit_window:
                break
    return certs, rounds, used


def _report_and_verify(
    g: Multigraph,
    candidates: list[tuple[int, int, frozenset[int]]],
    lam: int,
    config: SimConfig | None,
    verifier,
) -> tuple[tuple[int, int, frozenset[int]] | None, int, int]:
    """Convergecast the minimum, broadcast its witness, verify; walk down the
    candidate list until a witness passes.  Returns (winner, rounds, attempts).
    """
    rounds = 0
    tree, t_tree = truncated_bfs(g, Selector.all(), 0, g.n, config)
    rounds += t_tree.rounds

    local = {}
    for value, owner, _ in candidates:
        if owner not in local or (value, owner) < local[owner]:
            local[owner] = (value, owner)
    best, t_conv = convergecast_min(g, tree, local, config)
    rounds += t_conv.rounds

    ordered = sorted(candidates, key=lambda c: (c[0], c[1], sorted(c[2])))
    attempts = 0
    for value, owner, witness in ordered:
        attempts += 1
        if attempts > 1:
            rounds += t_conv.rounds  # renewed minimum election
        _, t_bc = broadcast(g, owner, sorted(witness), config)
        rounds += t_bc.rounds
        check = verifier(witness)
        rounds += check.rounds
        if check.is_cut:
            return (value, owner, witness), rounds, attempts
    return None, rounds, attempts


def randomized_min_cut(
    g: Multigraph,
    lam: int,
    seed: int,
    plan: IterationPlan | None = None,
    config: SimConfig | None = None,
    early_exit_window: int | None = None,
) -> CutResult:
    """Find a minimum edge cut of size <= lam, or report that none exists.

    Phase 1 accumulates per-node certificates over ``plan.iterations``
    sampled subgraphs; phase 2 elects the smallest locally computed cut and
    broadcasts it after distributed verification.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    plan = plan or IterationPlan.edges(g, lam)
    if plan.kind != "edges":
        raise ValueError("edge-mode plan required")
    source = 0

    certs, rounds, used = _grow_certificates(
        g, source, plan, seed, config, early_exit_window
    )

    candidates: list[tuple[int, int, frozenset[int]]] = []
    for t in range(g.n):
        if t == source:
            continue
        cert = StCertificate(t, source, frozenset(certs[t]))
        value, witness, _ = local_st_cut(g, cert, lam)
        if value <= lam:
            candidates.append((value, t, witness))

    winner, report_rounds, attempts = _report_and_verify(
        g, candidates, lam, config, lambda w: verify_cut(g, w, lam, config)
    )
    rounds += report_rounds

    frozen = {v: frozenset(edges) for v, edges in certs.items()}
    if winner is None:
        return CutResult(
            None, frozenset(), None, rounds, used, "randomized", lam, seed,
            certificates=frozen, attempts=attempts,
        )
    value, owner, witness = winner
    return CutResult(
        value, witness, owner, rounds, used, "randomized", lam, seed,
        certificates=frozen, attempts=attempts,
    )


def randomized_vertex_cut(
    g: Multigraph,
    lam: int,
    seed: int,
    plan: IterationPlan | None = None,
    config: SimConfig | None = None,
    early_exit_window: int | None = None,
) -> CutResult:
    """Vertex-cut variant: lam+1 sources, induced-subgraph sampling.

    Some minimum vertex cut avoids at least one of the lam+1 sources, so
    scanning all of them finds it.  Witnesses are node ids.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    if lam >= g.n - 1:
        # no room for a separating set between two distinct non-removed nodes
        return CutResult(
            None, frozenset(), None, 0, 0, "randomized-vertex", lam, seed,
            note="lam >= n-1: no finite vertex cut can exist",
        )
    plan = plan or IterationPlan.vertices(g, lam)
    if plan.kind != "vertices":
        raise ValueError("vertex-mode plan required")

    sources = list(range(min(lam + 1, g.n)))
    rounds = 0
    used_total = 0
    candidates: list[tuple[int, int, frozenset[int]]] = []
    adjacent_only = True
    for src in sources:
        certs, r, used = _grow_certificates(
            g, src, plan, (seed, src), config, early_exit_window
        )
        rounds += r
        used_total += used
        for t in range(g.n):
            if t == src:
                continue
            local = LocalGraph(g, certs[t])
            if src not in local.nodes() or t not in local.nodes():
                # never reached in any sample: claims a trivial separation,
                # which verification accepts only on a disconnected graph
                adjacent_only = False
                candidates.append((0, t, frozenset()))
                continue
            value, witness, adjacent = local.st_vertex_cut(src, t, lam + 1)
            if not adjacent:
                adjacent_only = False
                if value <= lam:
                    candidates.append((value, t, witness))

    winner, report_rounds, attempts = _report_and_verify(
        g, candidates, lam, config, lambda w: verify_vertex_cut(g, w, lam, config)
    )
    rounds += report_rounds

    note = "all source-target pairs adjacent" if adjacent_only else None
    if winner is None:
        return CutResult(
            None, frozenset(), None, rounds, used_total, "randomized-vertex",
            lam, seed, note=note, attempts=attempts,
        )
    value, owner, witness = winner
    return CutResult(
        value, witness, owner, rounds, used_total, "randomized-vertex", lam,
        seed, note=note, attempts=attempts,
    )


def scan_min_cut(
    g: Multigraph,
    lam_max: int,
    seed: int,
    plan_for=None,
    config: SimConfig | None = None,
) -> CutResult:
    """Outer driver for unknown connectivity: try lam = 1, 2, ... lam_max."""
    result = None
    for lam in range(1, lam_max + 1):
        plan = plan_for(g, lam) if plan_for else None
        result = randomized_min_cut(g, lam, seed, plan, config)
        if not result.exceeds_bound:
            return result
    return result


def enumerate_certificate_cuts(
    g: Multigraph, certificates: dict[int, frozenset[int]], source: int, value: int
) -> set[frozenset[int]]:
    """All size-``value`` source-owner cuts visible in any node's certificate.

    This is the locally enumerable knowledge: for each node, every minimum
    cut of its own certificate subgraph.
    """
    import itertools

    found: set[frozenset[int]] = set()
    for owner, edges in certificates.items():
        if owner == source or not edges:
            continue
        local = LocalGraph(g, edges)
        if source not in local.nodes() or owner not in local.nodes():
            continue
        nodes_reach = _subgraph_reachable(local, source)
        if owner not in nodes_reach:
            continue
        for combo in itertools.combinations(sorted(edges), value):
            removed = frozenset(combo)
            if owner not in _subgraph_reachable(local, source, removed):
                found.add(removed)
    return found


def _subgraph_reachable(
    local: LocalGraph, start: int, banned: frozenset[int] = frozenset()
) -> set[int]:
    reach = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for eid, y in local.adj.get(x, []):
            if eid not in banned and y not in reach:
                reach.add(y)
                queue.append(y)
    return reach


def phase_round_bound(plan: IterationPlan, g: Multigraph, lam: int, attempts: int) -> int:
    """Stated analytic round bound for one min-cut run with these parameters."""
    ecc = g.n  # coarse, always >= true eccentricity of node 0
    per_iteration = 3 * plan.depth_cap + 3
    reporting = (ecc + 1) + attempts * ((ecc + 1) + (ecc + lam + 1) + (plan.depth_cap + 2))
    return plan.iterations * per_iteration + reporting

"""Deterministic test-graph generators.

Specs are compact strings such as ``cycle(6)``, ``torus(3,4)``,
``multi_cycle(4,3)``, ``random_connected(10,2,0.1)`` or ``lower_bound(3,2)``.
Generation is a pure function of (spec, seed).
"""

from __future__ import annotations

import itertools
import math
import re

from . import rng
from .graphs import Multigraph, from_edge_list
from .oracles import min_cut_oracle

_SPEC_RE = re.compile(r"^\s*([a-z_]+)\s*\(([^)]*)\)\s*$")

MAX_REGENERATION_ATTEMPTS = 500


class GeneratorError(ValueError):
    pass


def cycle(n: int) -> Multigraph:
    if n < 3:
        raise GeneratorError("cycle needs n >= 3")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def torus(a: int, b: int) -> Multigraph:
    if a < 2 or b < 2:
        raise GeneratorError("torus needs a,b >= 2")
    pairs = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            pairs.append((v, i * b + (j + 1) % b))
            pairs.append((v, ((i + 1) % a) * b + j))
    return from_edge_list(a * b, pairs)


def multi_cycle(n: int, multiplicity: int) -> Multigraph:
    if multiplicity < 1:
        raise GeneratorError("multiplicity must be >= 1")
    base = cycle(n)
    pairs = []
    for _, u, v in base.edges:
        pairs.extend([(u, v)] * multiplicity)
    return from_edge_list(n, pairs)


def random_connected(n: int, lam: int, extra_edge_prob: float, seed: int) -> Multigraph:
    """Random graph whose exact edge connectivity is ``lam``.

    Candidates are built from a random backbone of the right flavor plus
    Bernoulli chords; each candidate is validated with the cut oracle and
    regenerated until the target holds exactly.
    """
    if lam < 1:
        raise GeneratorError("lam must be >= 1")
    if lam >= n:
        raise GeneratorError(f"cannot make a {lam}-connected graph on {n} nodes")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise GeneratorError("extra_edge_prob must be in [0,1]")

    for attempt in range(MAX_REGENERATION_ATTEMPTS):
        r = rng.make_rng((seed, attempt, "random_connected"))
        order = list(range(n))
        r.shuffle(order)
        pairs: set[tuple[int, int]] = set()

        def add(u: int, v: int) -> None:
            pairs.add((min(u, v), max(u, v)))

        if lam == 1:
            for i in range(1, n):
                add(order[i], order[r.randrange(i)])
        else:
            for i in range(n):
                add(order[i], order[(i + 1) % n])
            if lam >= 3:
                # chords: connect each node to lam-2 extra random targets
                for v in range(n):
                    for _ in range(lam - 2):
                        w = r.randrange(n)
                        if w != v:
                            add(v, w)
        for u, v in itertools.combinations(range(n), 2):
            if (u, v) not in pairs and r.random() < extra_edge_prob:
                add(u, v)

        g = from_edge_list(n, sorted(pairs))
        cut = min_cut_oracle(g, cap=lam)
        if not cut.truncated and cut.value == lam:
            return g
    raise GeneratorError(
        f"could not hit connectivity {lam} in {MAX_REGENERATION_ATTEMPTS} attempts"
    )


def lower_bound(diameter: int, lam: int) -> Multigraph:
    """Adjacent pair s=0, t=1 where every edge sits on a short detour cycle.

    Level 0 is the direct edge; each level attaches to every edge of the
    previous level a detour path of ``diameter - 1`` edges, closing a cycle
    of length ``diameter``.  After ``lam`` levels, any ``lam`` faults still
    leave s,t within 1 + lam*(diameter-2) hops, and the union of
    edge-disjoint s-t paths has size Theta(diameter**lam).
    """
    if diameter < 3:
        raise GeneratorError("lower_bound needs diameter >= 3")
    if lam < 1:
        raise GeneratorError("lower_bound needs lam >= 1")
    pairs: list[tuple[int, int]] = [(0, 1)]
    next_node = 2
    frontier = [(0, 1)]
    for _ in range(lam):
        new_frontier: list[tuple[int, int]] = []
        for u, v in frontier:
            chain = [u] + list(range(next_node, next_node + diameter - 2)) + [v]
            next_node += diameter - 2
            for a, b in zip(chain, chain[1:]):
                pairs.append((a, b))
                new_frontier.append((a, b))
        frontier = new_frontier
    return from_edge_list(next_node, pairs)


_GENERATORS = {
    "cycle": (cycle, 1, False),
    "torus": (torus, 2, False),
    "multi_cycle": (multi_cycle, 2, False),
    "random_connected": (random_connected, 3, True),
    "lower_bound": (lower_bound, 2, False),
}


def generate(spec: str, seed: int = 0) -> Multigraph:
    """Build the graph described by ``spec``; deterministic per (spec, seed)."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise GeneratorError(f"bad generator spec {spec!r}")
    name, arg_text = match.groups()
    if name not in _GENERATORS:
        raise GeneratorError(f"unknown generator {name!r}")
    fn, arity, seeded = _GENERATORS[name]
    args = [a.strip() for a in arg_text.split(",") if a.strip()]
    if len(args) != arity:
        raise GeneratorError(f"{name} takes {arity} arguments, got {len(args)}")
    values: list[float] = []
    for a in args:
        try:
            values.append(float(a) if ("." in a or "e" in a) else int(a))
        except ValueError:
            raise GeneratorError(f"bad argument {a!r} in {spec!r}") from None
    if seeded:
        return fn(*values, seed)
    return fn(*values)


def worst_fault_distance(g: Multigraph, s: int, t: int, max_faults: int) -> int | float:
    """Max over all edge fault sets |F| <= max_faults of dist(s,t,G-F)."""
    from .graphs import FaultSet
    from .oracles import dist_under_faults

    worst: int | float = 0
    ids = sorted(g.edge_ids)
    for size in range(max_faults + 1):
        for combo in itertools.combinations(ids, size):
            d = dist_under_faults(g, s, t, FaultSet.edges(combo))
            worst = max(worst, d)
    return worst

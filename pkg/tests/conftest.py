import pytest

from smallcuts.graphs import Multigraph, from_edge_list


def two_triangles_bridge() -> Multigraph:
    # 0-1-2 triangle, 3-4-5 triangle, bridge 2-3 (edge id 7)
    return from_edge_list(
        6,
        [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
    )


BRIDGE_EDGE_ID = 7


def two_k4_two_joins() -> Multigraph:
    # K4 on 0..3, K4 on 4..7, joined by edges 3-4 and 2-5 (ids 13, 14)
    pairs = []
    for base in (0, 4):
        nodes = range(base, base + 4)
        pairs.extend(
            (u, v) for i, u in enumerate(nodes) for v in list(nodes)[i + 1 :]
        )
    pairs.append((3, 4))
    pairs.append((2, 5))
    return from_edge_list(8, pairs)


JOIN_EDGE_IDS = frozenset({13, 14})


def petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def grid(rows: int, cols: int) -> Multigraph:
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    return from_edge_list(rows * cols, pairs)


def complete(n: int) -> Multigraph:
    return from_edge_list(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def path_graph(n: int) -> Multigraph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Multigraph:
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def double_bridge_triangles() -> Multigraph:
    # two triangles joined by a doubled bridge: min cut 2 via parallel edges
    return from_edge_list(
        6,
        [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3), (2, 3)],
    )


def wheel(rim: int) -> Multigraph:
    pairs = [(i, (i % rim) + 1) for i in range(1, rim + 1)]
    pairs.extend((0, i) for i in range(1, rim + 1))
    return from_edge_list(rim + 1, pairs)


@pytest.fixture
def bridge_graph():
    return two_triangles_bridge()


@pytest.fixture
def two_k4():
    return two_k4_two_joins()

"""Round-synchronous message-passing engine with bit accounting.

Semantics: messages sent during round r (or during the pre-round ``start``
phase, stamped round 0) are delivered at round r+1.  Nodes are stepped in
ascending id order inside a round, but a node only ever sees the frozen
inbox from the previous round, so the order is observation-irrelevant.  The
run halts at the first round with no undelivered messages and no node
flagged busy; ``max_rounds`` is a safety net.

Identical (graph, protocol, config) inputs produce bit-identical
transcripts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .graphs import Multigraph


class ProtocolError(RuntimeError):
    """A protocol broke an engine rule (e.g. two sends on one edge)."""


@dataclass(frozen=True)
class SimConfig:
    bit_budget: int | None = None  # None -> 2*ceil(log2 n) + 16
    max_rounds: int = 100_000
    log_messages: bool = True


def default_bit_budget(n: int) -> int:
    return 2 * max(1, (n - 1).bit_length()) + 16


@dataclass(frozen=True)
class Message:
    round: int
    edge_id: int
    src: int
    dst: int
    bits: int
    payload: tuple


@dataclass
class Transcript:
    """Everything observable about one run."""

    rounds: int
    outputs: dict[int, Any]
    messages: list[Message]
    message_count: int
    total_bits: int
    max_bits: int
    edge_traffic: Counter
    bit_budget: int
    budget_violated: bool
    timed_out: bool

    @property
    def max_congestion(self) -> int:
        return max(self.edge_traffic.values(), default=0)

    def log_lines(self) -> list[str]:
        return [
            f"{m.round} {m.edge_id} {m.src} {m.dst} {m.bits}" for m in self.messages
        ]

    def summary(self) -> dict[str, int]:
        return {
            "rounds": self.rounds,
            "messages": self.message_count,
            "bits": self.total_bits,
            "max_congestion": self.max_congestion,
        }

    def export(self) -> str:
        import json

        lines = self.log_lines()
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


class NodeView:
    """Per-node handle the protocol code talks to."""

    __slots__ = ("engine", "id", "busy", "output", "_sent_edges")

    def __init__(self, engine: "_Engine", node_id: int):
        self.engine = engine
        self.id = node_id
        self.busy = False
        self.output: Any = None
        self._sent_edges: set[int] = set()

    @property
    def n(self) -> int:
        return self.engine.g.n

    @property
    def graph(self) -> Multigraph:
        # Static map knowledge: an edge id is interchangeable with its
        # endpoint pair, so protocols may consult the edge map locally.
        return self.engine.g

    @property
    def round(self) -> int:
        return self.engine.round

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.engine.g.adjacency[self.id]

    def send(self, edge_id: int, tag: str, *args: int) -> None:
        self.engine.enqueue(self, edge_id, tag, args)

    def set_output(self, value: Any) -> None:
        self.output = value

    def set_busy(self, flag: bool = True) -> None:
        self.busy = flag


class Protocol:
    """Subclass and override; per-node state lives in dicts keyed by node."""

    def start(self, node: NodeView) -> None:
        pass

    def step(self, node: NodeView, inbox: Sequence[Message]) -> None:
        pass


class _Engine:
    def __init__(self, g: Multigraph, config: SimConfig):
        self.g = g
        self.config = config
        self.round = 0
        self.budget = (
            config.bit_budget if config.bit_budget is not None else default_bit_budget(g.n)
        )
        self.id_bits = max(1, (g.n - 1).bit_length())
        self.pending: list[Message] = []
        self.messages: list[Message] = []
        self.message_count = 0
        self.total_bits = 0
        self.max_bits = 0
        self.edge_traffic: Counter = Counter()
        self.budget_violated = False

    def payload_bits(self, args: tuple) -> int:
        bits = 8  # tag header
        for a in args:
            if not isinstance(a, int) or a < 0:
                raise ProtocolError(f"message fields must be non-negative ints, got {a!r}")
            bits += max(self.id_bits, a.bit_length())
        return bits

    def enqueue(self, node: NodeView, edge_id: int, tag: str, args: tuple) -> None:
        if edge_id in node._sent_edges:
            raise ProtocolError(
                f"node {node.id} sent twice on edge {edge_id} in round {self.round}"
            )
        node._sent_edges.add(edge_id)
        dst = self.g.other_endpoint(edge_id, node.id)
        bits = self.payload_bits(args)
        if bits > self.budget:
            self.budget_violated = True
        msg = Message(self.round, edge_id, node.id, dst, bits, (tag, *args))
        self.pending.append(msg)
        self.message_count += 1
        self.total_bits += bits
        self.max_bits = max(self.max_bits, bits)
        self.edge_traffic[edge_id] += 1
        if self.config.log_messages:
            self.messages.append(msg)


def run(g: Multigraph, protocol: Protocol, config: SimConfig | None = None) -> Transcript:
    """Execute ``protocol`` on ``g`` until quiescence or the round cap."""
    config = config or SimConfig()
    if config.max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    engine = _Engine(g, config)
    views = [NodeView(engine, v) for v in range(g.n)]

    engine.round = 0
    for view in views:
        protocol.start(view)

    timed_out = False
    executed = 0
    while True:
        inboxes: dict[int, list[Message]] = {}
        for msg in engine.pending:
            inboxes.setdefault(msg.dst, []).append(msg)
        engine.pending = []
        busy_nodes = [v.id for v in views if v.busy]
        active = sorted(set(inboxes) | set(busy_nodes))
        if not active:
            break
        if executed >= config.max_rounds:
            timed_out = True
            break
        executed += 1
        engine.round = executed
        for node_id in active:
            view = views[node_id]
            view._sent_edges = set()
            inbox = sorted(
                inboxes.get(node_id, []), key=lambda m: (m.edge_id, m.src)
            )
            protocol.step(view, inbox)

    return Transcript(
        rounds=executed,
        outputs={v.id: v.output for v in views if v.output is not None},
        messages=engine.messages,
        message_count=engine.message_count,
        total_bits=engine.total_bits,
        max_bits=engine.max_bits,
        edge_traffic=engine.edge_traffic,
        bit_budget=engine.budget,
        budget_violated=engine.budget_violated,
        timed_out=timed_out,
    )


@dataclass(frozen=True)
class RoundReport:
    rounds: int
    messages: int
    bits: int
    max_congestion: int
    max_bits: int
    budget_violated: bool
    timed_out: bool


def metrics(t: Transcript) -> RoundReport:
    return RoundReport(
        rounds=t.rounds,
        messages=t.message_count,
        bits=t.total_bits,
        max_congestion=t.max_congestion,
        max_bits=t.max_bits,
        budget_violated=t.budget_violated,
        timed_out=t.timed_out,
    )


def merge_rounds(transcripts: Sequence[Transcript]) -> int:
    return sum(t.rounds for t in transcripts)

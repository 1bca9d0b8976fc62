"""Small-cut algorithms on a round-accurate message-passing simulator."""

__version__ = "0.1.0"

from .graphs import FaultSet, GraphParseError, Multigraph, load_graph, parse_graph, save_graph
from .oracles import OracleCut, dist_under_faults, min_cut_oracle, vertex_cut_oracle
from .generators import generate
from .engine import Protocol, SimConfig, Transcript, metrics, run

__all__ = [
    "FaultSet",
    "GraphParseError",
    "Multigraph",
    "OracleCut",
    "Protocol",
    "SimConfig",
    "Transcript",
    "dist_under_faults",
    "generate",
    "load_graph",
    "metrics",
    "min_cut_oracle",
    "parse_graph",
    "run",
    "save_graph",
    "vertex_cut_oracle",
]

"""Shortest-path-tree maintenance over streaming edge insertions and deletions.

A desk-scale, shared-nothing, vertex-centric message-passing runtime keeps a
single-source shortest-path tree current while a stream of edge additions and
deletions is ingested. The package also ships the sliding-window stream
generator, a recompute-from-scratch baseline engine, a Dijkstra/Bellman-Ford
validation oracle, and a metrics harness with a CLI.
"""

from .baseline import RecomputeBaseline
from .engine import DeletionRecord, DynamicSsspEngine
from .graph import GraphPartition, PartitionedGraph, VertexState
from .harness import (
    QueryRecord,
    RunConfig,
    RunReport,
    ValidationFailure,
    WindowRate,
    dump_tree,
    load_tree_dump,
    make_engine,
    run,
)
from .oracle import (
    AdjacencyView,
    ValidationReport,
    bellman_ford,
    dijkstra,
    stability,
    validate_tree,
)
from .runtime import Mailbox, Runtime, TraceRecorder, Worker
from .stream import (
    EdgeRecord,
    StreamConfig,
    load_edge_log,
    read_stream,
    select_sources,
    synthesize_stream,
    window_eligible,
    write_stream,
)
from .types import (
    INF,
    AlgoMessage,
    EpochTimeoutError,
    EventKind,
    HandlerPanic,
    InternalConsistencyError,
    MessageKind,
    Phase,
    StreamConsistencyError,
    StreamFormatError,
    TopologyEvent,
    TreeSnapshot,
    WeightedEdge,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyView",
    "AlgoMessage",
    "DeletionRecord",
    "DynamicSsspEngine",
    "EdgeRecord",
    "EpochTimeoutError",
    "EventKind",
    "GraphPartition",
    "HandlerPanic",
    "INF",
    "InternalConsistencyError",
    "Mailbox",
    "MessageKind",
    "PartitionedGraph",
    "Phase",
    "QueryRecord",
    "RecomputeBaseline",
    "RunConfig",
    "RunReport",
    "Runtime",
    "StreamConfig",
    "StreamConsistencyError",
    "StreamFormatError",
    "TopologyEvent",
    "TraceRecorder",
    "TreeSnapshot",
    "ValidationFailure",
    "ValidationReport",
    "VertexState",
    "WeightedEdge",
    "WindowRate",
    "Worker",
    "bellman_ford",
    "dijkstra",
    "dump_tree",
    "load_edge_log",
    "load_tree_dump",
    "make_engine",
    "read_stream",
    "run",
    "select_sources",
    "stability",
    "synthesize_stream",
    "validate_tree",
    "window_eligible",
    "write_stream",
]

"""Shortest-path-tree maintenance under streaming edge additions and deletions.

Additions relax monotonically: the tail of a new edge offers its distance
plus the edge weight to the head, and any accepted improvement fans out along
the acceptor's out-edges. A deletion of a tree edge is handled inside an
epoch bracket in two drained phases: first the detached subtree is marked
unreachable (``SET_TO_INFINITY`` flood along successor links), then every
marked vertex asks its remaining in-neighbours for the best distance they can
offer (``DISTANCE_QUERY`` / ``DISTANCE_UPDATE``) until the system is quiescent
again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .runtime import Runtime
from .types import (
    INF,
    AlgoMessage,
    EventKind,
    InternalConsistencyError,
    MessageKind,
    Phase,
    TopologyEvent,
    TreeSnapshot,
)

_ADD_EDGE = EventKind.ADD_EDGE
_DELETE_EDGE = EventKind.DELETE_EDGE
_DISTANCE_QUERY = MessageKind.DISTANCE_QUERY
_DISTANCE_UPDATE = MessageKind.DISTANCE_UPDATE
_SET_TO_INFINITY = MessageKind.SET_TO_INFINITY
_ADD_TO_SUCCESSOR = MessageKind.ADD_TO_SUCCESSOR
_REMOVE_FROM_SUCCESSOR = MessageKind.REMOVE_FROM_SUCCESSOR


@dataclass(frozen=True)
class DeletionRecord:
    """Per-deletion instrumentation, recorded only when `record_deletions` is on."""

    src: int
    dst: int
    edges_before: int  # |E| when the deletion event arrived
    invalidated: int  # size of the detached subtree
    set_to_infinity: int  # messages processed during the invalidation drain


class _VertexHandlers:
    """The per-vertex message handlers, shared by both engines.

    Handlers run on the worker owning the receiving vertex, mutate only that
    vertex's state, and emit messages through the runtime.
    """

    def __init__(self, runtime: Runtime):
        self.runtime = runtime
        self.graph = runtime.graph

    def on_message(self, msg: AlgoMessage) -> None:
        kind = msg.kind
        if kind == _DISTANCE_UPDATE:
            self._on_distance_update(msg.receiver, msg.sender, msg.distance)
        elif kind == _ADD_TO_SUCCESSOR:
            self.graph.vertex(msg.receiver).successors.add(msg.sender)
        elif kind == _REMOVE_FROM_SUCCESSOR:
            self.graph.vertex(msg.receiver).successors.discard(msg.sender)
        elif kind == _DISTANCE_QUERY:
            self._on_distance_query(msg.receiver, msg.sender)
        elif kind == _SET_TO_INFINITY:
            self._on_set_to_infinity(msg.receiver)
        else:
            raise InternalConsistencyError(f"unknown message kind {kind}")

    def _on_distance_update(self, v: int, u: int, dist: float) -> None:
        st = self.graph.vertex(v)
        # Strict improvement only: ties keep the incumbent predecessor.
        if dist < st.distance:
            st.distance = dist
            send = self.runtime.send
            old = st.predecessor
            if old is not None:
                send(AlgoMessage(_REMOVE_FROM_SUCCESSOR, v, old))
            st.predecessor = u
            st.marked_infinity = False
            send(AlgoMessage(_ADD_TO_SUCCESSOR, v, u))
            # Snapshot: ingestion may append out-edges concurrently.
            for dst, w in list(st.out_edges.items()):
                send(AlgoMessage(_DISTANCE_UPDATE, v, dst, dist + w))

    def _on_distance_query(self, v: int, querier: int) -> None:
        st = self.graph.vertex(v)
        if st.distance != INF:
            w = self.graph.get_edge_weight(v, querier)
            self.runtime.send(
                AlgoMessage(_DISTANCE_UPDATE, v, querier, st.distance + w)
            )

    def _on_set_to_infinity(self, v: int) -> None:
        st = self.graph.vertex(v)
        if not st.marked_infinity:
            st.marked_infinity = True
            self.graph.partition_of(v).marked_dirty.append(v)
        st.distance = INF
        if st.successors:
            send = self.runtime.send
            for w in st.successors:
                send(AlgoMessage(_SET_TO_INFINITY, v, w))
            st.successors.clear()
        st.predecessor = None


class DynamicSsspEngine(_VertexHandlers):
    """Maintains the tree continuously; deletions run the two-phase protocol."""

    def __init__(
        self,
        runtime: Runtime,
        source: int,
        record_deletions: bool = False,
    ):
        super().__init__(runtime)
        self.source = source
        self.graph.ensure_vertex(source).distance = 0.0
        self.deletion_log: Optional[list[DeletionRecord]] = (
            [] if record_deletions else None
        )
        runtime.start(self._on_topology, self.on_message)

    # Worker side: the only topology events routed to workers are additions.
    def _on_topology(self, ev: TopologyEvent) -> None:
        st = self.graph.vertex(ev.src)
        # A tail at +inf has nothing useful to offer; the fan-out on its own
        # first acceptance covers this edge.
        if st.distance != INF:
            self.runtime.send(
                AlgoMessage(_DISTANCE_UPDATE, ev.src, ev.dst, st.distance + ev.weight)
            )

    # Controller side.
    def ingest(self, ev: TopologyEvent) -> None:
        rt = self.runtime
        assert not rt.ingestion_paused, "ingest while paused"
        kind = ev.kind
        if kind == _ADD_EDGE:
            if self.graph.add_edge(ev.src, ev.dst, ev.weight):
                rt.submit(ev)
                if rt.inline:
                    rt.drain()
        elif kind == _DELETE_EDGE:
            self._process_deletion(ev.src, ev.dst)
        else:
            raise InternalConsistencyError(
                "query markers are answered via query(), not ingest()"
            )

    def query(self, event_index: int = 0) -> TreeSnapshot:
        rt = self.runtime
        rt.enforce_epoch()
        snap = rt.collect_state(event_index)
        rt.resume()
        return snap

    def _process_deletion(self, u: int, v: int) -> None:
        rt = self.runtime
        edges_before = self.graph.edge_count
        rt.enforce_epoch()
        self.graph.delete_edge(u, v)
        tail = self.graph.vertex(u)
        if v in tail.successors:
            # The deleted edge lay on the tree: detach the head's subtree.
            tail.successors.discard(v)
            trace = rt.trace
            sti_before = (
                trace.messages_processed(kind=_SET_TO_INFINITY)
                if trace is not None
                else 0
            )
            rt.phase = Phase.INVALIDATION
            rt.send(AlgoMessage(_SET_TO_INFINITY, u, v))
            rt.drain()
            marked = rt.collect_marked()
            rt.phase = Phase.RECOMPUTATION
            for x in sorted(marked):
                st = self.graph.vertex(x)
                for p in sorted(st.incoming):
                    rt.send(AlgoMessage(_DISTANCE_QUERY, x, p))
                st.marked_infinity = False
            rt.drain()
            rt.phase = Phase.IDLE
            if self.deletion_log is not None:
                sti = (
                    trace.messages_processed(kind=_SET_TO_INFINITY) - sti_before
                    if trace is not None
                    else len(marked)
                )
                self.deletion_log.append(
                    DeletionRecord(u, v, edges_before, len(marked), sti)
                )
        rt.resume()

"""Recompute-from-scratch comparison engine.

During streaming it maintains topology only. Each query cold-starts the
monotone relaxation on the current snapshot: reset every vertex, seed
distance updates from the source along its out-edges, drain to quiescence
through the same runtime and the same relaxation handler as the dynamic
engine, then collect.
"""

from __future__ import annotations

from .engine import _VertexHandlers
from .runtime import Runtime
from .types import (
    INF,
    AlgoMessage,
    EventKind,
    InternalConsistencyError,
    MessageKind,
    TopologyEvent,
    TreeSnapshot,
)


class RecomputeBaseline(_VertexHandlers):
    def __init__(self, runtime: Runtime, source: int):
        super().__init__(runtime)
        self.source = source
        self.graph.ensure_vertex(source)
        runtime.start(self._on_topology, self.on_message)

    def _on_topology(self, ev: TopologyEvent) -> None:
        raise InternalConsistencyError(
            "baseline submits no topology events to workers"
        )

    def ingest(self, ev: TopologyEvent) -> None:
        # Topology bookkeeping only; no algorithmic work until a query.
        assert not self.runtime.ingestion_paused, "ingest while paused"
        kind = ev.kind
        if kind == EventKind.ADD_EDGE:
            self.graph.add_edge(ev.src, ev.dst, ev.weight)
        elif kind == EventKind.DELETE_EDGE:
            self.graph.delete_edge(ev.src, ev.dst)
        else:
            raise InternalConsistencyError(
                "query markers are answered via query(), not ingest()"
            )

    def query(self, event_index: int = 0, source: int | None = None) -> TreeSnapshot:
        """Cold-start the relaxation on the current snapshot, from the
        engine's source by default or from `source` when given."""
        origin = self.source if source is None else source
        rt = self.runtime
        rt.enforce_epoch()
        self._reset(origin)
        src = self.graph.vertex(origin)
        for dst, w in list(src.out_edges.items()):
            rt.send(AlgoMessage(MessageKind.DISTANCE_UPDATE, origin, dst, w))
        rt.drain()
        snap = rt.collect_state(event_index)
        rt.resume()
        return snap

    def _reset(self, origin: int) -> None:
        # Per-query scratch: nothing algorithmic survives between queries.
        for _, st in self.graph.items():
            st.distance = INF
            st.predecessor = None
            st.marked_infinity = False
            if st.successors:
                st.successors.clear()
        self.graph.ensure_vertex(origin).distance = 0.0

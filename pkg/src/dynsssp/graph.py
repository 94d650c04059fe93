"""Partitioned adjacency store and per-vertex algorithm state.

Ownership discipline (what makes the shared-nothing model safe in-process):

* Algorithm state of a vertex (``distance``, ``predecessor``, ``successors``,
  ``marked_infinity``) is touched only by the worker that owns the vertex,
  except at quiescent points where the single ingestion controller may read
  or reset it.
* Topology (``out_edges`` of every vertex, ``incoming`` of every vertex, the
  global edge count) is written only by the ingestion controller. Workers
  read ``out_edges`` through atomic point lookups or point-in-time copies,
  never through live iteration, so no locking is required under CPython.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .types import (
    INF,
    InternalConsistencyError,
    StreamConsistencyError,
    StreamFormatError,
    WeightedEdge,
)


@dataclass(slots=True)
class VertexState:
    """Per-vertex state: tree fields plus the local slice of the topology."""

    distance: float = INF
    predecessor: Optional[int] = None
    successors: set[int] = field(default_factory=set)
    incoming: set[int] = field(default_factory=set)
    marked_infinity: bool = False
    out_edges: dict[int, float] = field(default_factory=dict)


class GraphPartition:
    """The vertices owned by one worker. Never shared between workers."""

    __slots__ = ("owner", "vertices", "marked_dirty")

    def __init__(self, owner: int):
        self.owner = owner
        self.vertices: dict[int, VertexState] = {}
        # Vertices newly invalidated during the current deletion; appended by
        # the owning worker, drained by the controller at quiescence.
        self.marked_dirty: list[int] = []


class PartitionedGraph:
    """Directed graph split across disjoint partitions by vertex-id modulo.

    Vertices are created implicitly on first reference and persist for the
    lifetime of the run (a vertex whose edges are all deleted remains, at
    distance +inf).
    """

    def __init__(self, partitions: int = 1):
        if partitions < 1:
            raise ValueError("need at least one partition")
        self.partitions = [GraphPartition(i) for i in range(partitions)]
        self._n = partitions
        self.edge_count = 0

    def owner_of(self, vid: int) -> int:
        return vid % self._n

    def partition_of(self, vid: int) -> GraphPartition:
        return self.partitions[vid % self._n]

    def ensure_vertex(self, vid: int) -> VertexState:
        """Create-on-first-reference. Controller thread only."""
        part = self.partitions[vid % self._n]
        st = part.vertices.get(vid)
        if st is None:
            st = VertexState()
            part.vertices[vid] = st
        return st

    def vertex(self, vid: int) -> VertexState:
        try:
            return self.partitions[vid % self._n].vertices[vid]
        except KeyError:
            raise InternalConsistencyError(f"vertex {vid} was never created") from None

    def has_vertex(self, vid: int) -> bool:
        return vid in self.partitions[vid % self._n].vertices

    def add_edge(self, u: int, v: int, weight: float) -> bool:
        """Insert edge (u, v). Returns False and leaves the graph untouched
        when the edge already exists (duplicates are dropped, first weight
        wins). Controller thread only."""
        if not weight > 0:
            raise StreamFormatError(
                f"edge ({u}, {v}) has non-positive weight {weight!r}; weights must be > 0"
            )
        src = self.ensure_vertex(u)
        if v in src.out_edges:
            return False
        dst = self.ensure_vertex(v)
        src.out_edges[v] = weight
        dst.incoming.add(u)
        self.edge_count += 1
        return True

    def delete_edge(self, u: int, v: int) -> WeightedEdge:
        """Remove edge (u, v) and return it. Controller thread, at quiescence
        (or while no algorithmic work is in flight)."""
        if not self.has_vertex(u) or v not in self.vertex(u).out_edges:
            raise StreamConsistencyError(
                f"stream deletes edge ({u}, {v}) which does not exist"
            )
        weight = self.vertex(u).out_edges.pop(v)
        self.vertex(v).incoming.discard(u)
        self.edge_count -= 1
        return WeightedEdge(v, weight)

    def get_edge_weight(self, u: int, v: int) -> float:
        """Weight of edge (u, v); the edge must exist."""
        try:
            return self.partitions[u % self._n].vertices[u].out_edges[v]
        except KeyError:
            raise InternalConsistencyError(
                f"edge ({u}, {v}) queried but not present"
            ) from None

    def vertex_ids(self) -> Iterator[int]:
        for part in self.partitions:
            yield from part.vertices

    def items(self) -> Iterator[tuple[int, VertexState]]:
        for part in self.partitions:
            yield from part.vertices.items()

    def export_edges(self) -> Iterator[tuple[int, int, float]]:
        """All current edges as (src, dst, weight). Quiescent points only."""
        for part in self.partitions:
            for vid, st in part.vertices.items():
                for dst, w in st.out_edges.items():
                    yield vid, dst, w

    @property
    def vertex_count(self) -> int:
        return sum(len(p.vertices) for p in self.partitions)

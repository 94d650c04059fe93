"""Ground-truth machinery: Dijkstra, tree validation, snapshot stability.

Exact floating-point equality is used throughout: every distance the engine
produces is literally a chain of ``d(pred) + w`` float additions, and
Dijkstra computes the same unique least fixpoint of exact float relaxation,
so equal values are bit-identical. The distance comparison falls back to a
relative tolerance of 1e-12 only if a platform difference ever surfaces, and
records that it did.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .types import INF, TreeSnapshot

log = logging.getLogger(__name__)

_REL_TOL = 1e-12


class AdjacencyView:
    """Mutable directed adjacency used as the ground-truth graph view.

    Vertices persist once referenced, matching the engine's convention that a
    vertex whose edges were all deleted still exists at distance +inf.
    """

    __slots__ = ("_out",)

    def __init__(self):
        self._out: dict[int, dict[int, float]] = {}

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int, float]]) -> "AdjacencyView":
        view = cls()
        for u, v, w in edges:
            view.add_edge(u, v, w)
        return view

    def ensure_vertex(self, v: int) -> None:
        if v not in self._out:
            self._out[v] = {}

    def add_edge(self, u: int, v: int, w: float) -> None:
        self.ensure_vertex(u)
        self.ensure_vertex(v)
        self._out[u][v] = w

    def remove_edge(self, u: int, v: int) -> None:
        del self._out[u][v]

    def weight(self, u: int, v: int) -> Optional[float]:
        row = self._out.get(u)
        if row is None:
            return None
        return row.get(v)

    def out_edges(self, u: int) -> Iterable[tuple[int, float]]:
        return self._out.get(u, {}).items()

    def vertices(self) -> Iterable[int]:
        return self._out.keys()

    def edge_count(self) -> int:
        return sum(len(row) for row in self._out.values())

    def __contains__(self, v: int) -> bool:
        return v in self._out

    def __len__(self) -> int:
        return len(self._out)


def dijkstra(adjacency: AdjacencyView, source: int) -> TreeSnapshot:
    """Exact shortest distances from `source` on the current view.

    Unreachable vertices get (+inf, no predecessor). All weights must be
    positive."""
    adjacency.ensure_vertex(source)
    ids = sorted(adjacency.vertices())
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    for u in ids:
        ui = index[u]
        for v, w in adjacency.out_edges(u):
            rows.append(ui)
            cols.append(index[v])
            data.append(w)
    matrix = csr_matrix(
        (np.asarray(data), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n, n),
    )
    dist, pred = _csgraph_dijkstra(
        matrix, indices=index[source], return_predecessors=True
    )
    entries = []
    for v in ids:
        i = index[v]
        p = int(pred[i])
        entries.append((v, ids[p] if p >= 0 else None, float(dist[i])))
    return TreeSnapshot(tuple(entries))


def bellman_ford(adjacency: AdjacencyView, source: int) -> TreeSnapshot:
    """Independent cross-check oracle: plain relax-to-fixpoint."""
    adjacency.ensure_vertex(source)
    dist: dict[int, float] = {v: INF for v in adjacency.vertices()}
    pred: dict[int, Optional[int]] = {v: None for v in adjacency.vertices()}
    dist[source] = 0.0
    edges = [
        (u, v, w) for u in adjacency.vertices() for v, w in adjacency.out_edges(u)
    ]
    for _ in range(max(1, len(dist))):
        changed = False
        for u, v, w in edges:
            alt = dist[u] + w
            if alt < dist[v]:
                dist[v] = alt
                pred[v] = u
                changed = True
        if not changed:
            break
    entries = tuple((v, pred[v], dist[v]) for v in sorted(dist))
    return TreeSnapshot(entries)


@dataclass
class ValidationReport:
    passed: bool
    violation: Optional[str] = None
    vertex: Optional[int] = None
    checks_run: int = 0
    tolerance_fallbacks: int = 0
    notes: list[str] = field(default_factory=list)


def validate_tree(
    snap: TreeSnapshot, adjacency: AdjacencyView, source: int
) -> ValidationReport:
    """Structural and numeric validation of a snapshot against the view.

    Checks, in order: (1) every predecessor edge exists; (2) each distance
    equals the predecessor's distance plus the edge weight, exactly;
    (3) the predecessor graph is acyclic and connects every finite-distance
    vertex to the source, the source has distance 0 and no predecessor, and
    predecessor-is-none coincides with distance +inf for non-source vertices;
    (4) distances equal Dijkstra's. Stops at the first violation.
    """
    report = ValidationReport(passed=True)
    pred = snap.predecessors()
    dist = snap.distances()

    def fail(check: int, vertex: int, msg: str) -> ValidationReport:
        report.passed = False
        report.vertex = vertex
        report.violation = f"check {check}: vertex {vertex}: {msg}"
        return report

    # (1) predecessor edges exist, (2) exact edge arithmetic
    for v, p, d in snap.entries:
        report.checks_run += 1
        if p is None:
            continue
        w = adjacency.weight(p, v)
        if w is None:
            return fail(1, v, f"predecessor edge ({p}, {v}) not in graph")
        expected = dist[p] + w
        if d != expected:
            return fail(
                2, v, f"distance {d!r} != distance({p}) + weight = {expected!r}"
            )

    # (3) structure: acyclic, rooted at source, none <=> +inf
    if source in dist:
        if dist[source] != 0.0:
            return fail(3, source, f"source distance {dist[source]!r} != 0.0")
        if pred[source] is not None:
            return fail(3, source, "source has a predecessor")
    state: dict[int, int] = {}  # 1 = on current chain, 2 = settled
    for v in dist:
        report.checks_run += 1
        if v != source:
            if (pred[v] is None) != (dist[v] == INF):
                return fail(
                    3, v, f"predecessor {pred[v]!r} inconsistent with distance {dist[v]!r}"
                )
        if dist[v] == INF:
            continue
        chain = []
        x = v
        while True:
            mark = state.get(x)
            if mark == 2:
                break
            if mark == 1:
                return fail(3, v, f"predecessor cycle through {x}")
            state[x] = 1
            chain.append(x)
            if x == source:
                break
            x = pred[x]
            if x is None or x not in dist:
                return fail(3, v, "finite-distance vertex does not reach the source")
        for x in chain:
            state[x] = 2

    # (4) distances match Dijkstra
    truth = dijkstra(adjacency, source).distances()
    for v, d in dist.items():
        report.checks_run += 1
        t = truth.get(v, INF)
        if d != t:
            if t != 0 and d != INF and t != INF and abs(d - t) <= _REL_TOL * abs(t):
                report.tolerance_fallbacks += 1
                note = f"vertex {v}: distance {d!r} within 1e-12 of oracle {t!r}"
                report.notes.append(note)
                log.warning("validate_tree tolerance fallback: %s", note)
                continue
            return fail(4, v, f"distance {d!r} != oracle {t!r}")
    for v, t in truth.items():
        if v not in dist and t != INF:
            return fail(4, v, f"reachable vertex missing from snapshot (oracle {t!r})")
    return report


def stability(prev: TreeSnapshot, cur: TreeSnapshot) -> float:
    """Percentage of vertices present in both snapshots whose predecessor is
    unchanged. None -> None counts as unchanged; vertices present in only one
    snapshot are excluded. An empty intersection is vacuously 100."""
    prev_pred = prev.predecessors()
    cur_pred = cur.predecessors()
    if len(prev_pred) > len(cur_pred):
        prev_pred, cur_pred = cur_pred, prev_pred
    common = 0
    same = 0
    for v, p in prev_pred.items():
        if v in cur_pred:
            common += 1
            if cur_pred[v] == p:
                same += 1
    if common == 0:
        return 100.0
    return 100.0 * same / common

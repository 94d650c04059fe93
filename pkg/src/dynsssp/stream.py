"""Edge-log loading, sliding-window event-stream synthesis, stream files,
and source selection.

Window model: while emitting an addition with timestamp T, every still-live
edge with timestamp < T - W gets exactly one deletion coin flip (probability
delta) at its first eligibility; survivors are never reconsidered. The
expected fraction of aged-out edges deleted is therefore exactly delta, and a
fixed (log, config) pair always synthesizes the same stream.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence, TextIO, Union

import numpy as np
from scipy.sparse import csr_matrix

from .types import (
    MAX_VERTEX_ID,
    EventKind,
    StreamFormatError,
    TopologyEvent,
)


class EdgeRecord(NamedTuple):
    src: int
    dst: int
    weight: float
    timestamp: int


@dataclass(frozen=True)
class StreamConfig:
    """Knobs for synthesize_stream.

    window: logical-time span W kept alive (same units as the log timestamps).
    delete_prob: probability delta that an aged-out edge is deleted.
    query_interval: emit a query marker every this many events (additions and
        deletions both count); None disables marker injection.
    seed: RNG seed; synthesis is a pure function of (log, config).
    source_rank: which top-ranked vertex to use when the source is chosen
        automatically (1-based).
    """

    window: float
    delete_prob: float = 0.0
    query_interval: Optional[int] = None
    seed: int = 0
    source_rank: int = 1

    def __post_init__(self):
        if not self.window > 0:
            raise ValueError("window must be > 0")
        if not 0.0 <= self.delete_prob <= 1.0:
            raise ValueError("delete_prob must be in [0, 1]")
        if self.query_interval is not None and self.query_interval < 1:
            raise ValueError("query_interval must be >= 1")
        if self.source_rank < 1:
            raise ValueError("source_rank is 1-based")


def _parse_vertex(token: str, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise StreamFormatError(f"line {lineno}: bad vertex id {token!r}") from None
    if not 0 <= v <= MAX_VERTEX_ID:
        raise StreamFormatError(f"line {lineno}: vertex id {v} outside unsigned 32-bit range")
    return v


def _parse_weight(token: str, lineno: int) -> float:
    try:
        w = float(token)
    except ValueError:
        raise StreamFormatError(f"line {lineno}: bad weight {token!r}") from None
    if not w > 0 or w != w or w == float("inf"):
        raise StreamFormatError(f"line {lineno}: weight must be finite and > 0, got {token!r}")
    return w


def load_edge_log(path: Union[str, Path]) -> list[EdgeRecord]:
    """Load a whitespace-separated edge log: `src dst [weight] [timestamp]`
    per line, `#` comments ignored.

    Duplicate (src, dst) pairs after the first are dropped (simple graph).
    Unweighted logs get weight 1; logs without timestamps get strictly
    increasing indices 1..n in file order. Column count must be consistent
    across the file.
    """
    records: list[EdgeRecord] = []
    seen: set[tuple[int, int]] = set()
    arity: Optional[int] = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if arity is None:
                if len(parts) not in (2, 3, 4):
                    raise StreamFormatError(
                        f"line {lineno}: expected 2-4 columns, got {len(parts)}"
                    )
                arity = len(parts)
            elif len(parts) != arity:
                raise StreamFormatError(
                    f"line {lineno}: inconsistent column count "
                    f"({len(parts)} vs {arity} on the first data line)"
                )
            src = _parse_vertex(parts[0], lineno)
            dst = _parse_vertex(parts[1], lineno)
            weight = _parse_weight(parts[2], lineno) if arity >= 3 else 1.0
            if arity == 4:
                try:
                    ts = int(parts[3])
                except ValueError:
                    raise StreamFormatError(
                        f"line {lineno}: bad timestamp {parts[3]!r}"
                    ) from None
                if ts < 0:
                    raise StreamFormatError(f"line {lineno}: negative timestamp {ts}")
            else:
                ts = 0  # substituted after dedup
            if (src, dst) in seen:
                continue
            seen.add((src, dst))
            records.append(EdgeRecord(src, dst, weight, ts))
    if arity is not None and arity < 4:
        records = [r._replace(timestamp=i) for i, r in enumerate(records, start=1)]
    return records


def synthesize_stream(
    log: Sequence[EdgeRecord], cfg: StreamConfig
) -> list[TopologyEvent]:
    """Turn a timestamp-sorted edge log into an event stream with
    sliding-window deletions and optional query markers.

    Deletions triggered by an addition at timestamp T are emitted before that
    addition. Markers are emitted after every `query_interval` additions or
    deletions.
    """
    last_ts = None
    for rec in log:
        if last_ts is not None and rec.timestamp < last_ts:
            raise ValueError("edge log must be sorted by timestamp")
        last_ts = rec.timestamp
    rng = random.Random(cfg.seed)
    interval = cfg.query_interval
    delete_prob = cfg.delete_prob
    events: list[TopologyEvent] = []
    live: deque[EdgeRecord] = deque()
    counter = 0

    def emit(ev: TopologyEvent) -> None:
        nonlocal counter
        events.append(ev)
        counter += 1
        if interval is not None and counter % interval == 0:
            events.append(TopologyEvent(EventKind.QUERY_MARKER, timestamp=ev.timestamp))

    for rec in log:
        horizon = rec.timestamp - cfg.window
        while live and live[0].timestamp < horizon:
            old = live.popleft()
            if rng.random() < delete_prob:
                emit(
                    TopologyEvent(
                        EventKind.DELETE_EDGE, old.src, old.dst, timestamp=rec.timestamp
                    )
                )
        emit(
            TopologyEvent(
                EventKind.ADD_EDGE, rec.src, rec.dst, rec.weight, rec.timestamp
            )
        )
        live.append(rec)
    return events


def window_eligible(log: Sequence[EdgeRecord], window: float) -> list[EdgeRecord]:
    """Edges that age out of the window during the stream, i.e. receive a
    deletion coin flip regardless of its outcome. Independent companion for
    checking synthesize_stream statistics.

    An edge aged out iff some later addition carries a timestamp beyond
    ts + window; with the log sorted that is exactly the last timestamp."""
    if not log:
        return []
    last_ts = log[-1].timestamp
    return [rec for rec in log if rec.timestamp < last_ts - window]


# -- materialized stream files -------------------------------------------------

def write_stream(events: Iterable[TopologyEvent], path: Union[str, Path]) -> None:
    """Write events as one line each: `a src dst weight`, `d src dst`, `q`."""
    with open(path, "w", encoding="utf-8") as f:
        _write_stream_fh(events, f)


def _write_stream_fh(events: Iterable[TopologyEvent], f: TextIO) -> None:
    for ev in events:
        if ev.kind == EventKind.ADD_EDGE:
            f.write(f"a {ev.src} {ev.dst} {ev.weight!r}\n")
        elif ev.kind == EventKind.DELETE_EDGE:
            f.write(f"d {ev.src} {ev.dst}\n")
        elif ev.kind == EventKind.QUERY_MARKER:
            f.write("q\n")
        else:
            raise ValueError(f"unknown event kind {ev.kind}")


def read_stream(path: Union[str, Path]) -> list[TopologyEvent]:
    """Parse a materialized stream file (the write_stream format)."""
    events: list[TopologyEvent] = []
    ts = 0
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            tag = parts[0]
            if tag == "a" and len(parts) == 4:
                src = _parse_vertex(parts[1], lineno)
                dst = _parse_vertex(parts[2], lineno)
                w = _parse_weight(parts[3], lineno)
                ts += 1
                events.append(TopologyEvent(EventKind.ADD_EDGE, src, dst, w, ts))
            elif tag == "d" and len(parts) == 3:
                src = _parse_vertex(parts[1], lineno)
                dst = _parse_vertex(parts[2], lineno)
                ts += 1
                events.append(TopologyEvent(EventKind.DELETE_EDGE, src, dst, timestamp=ts))
            elif tag == "q" and len(parts) == 1:
                events.append(TopologyEvent(EventKind.QUERY_MARKER, timestamp=ts))
            else:
                raise StreamFormatError(f"line {lineno}: bad stream line {stripped!r}")
    return events


def is_stream_file(path: Union[str, Path]) -> bool:
    """True when the first data line looks like a materialized stream event."""
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            return stripped.split()[0] in ("a", "d", "q")
    return False


# -- source selection ------------------------------------------------------------

def select_sources(
    edges: Iterable[tuple[int, int]],
    k: int = 3,
    damping: float = 0.85,
    max_iter: int = 50,
    tol: float = 1e-9,
) -> list[int]:
    """Top-k vertices by PageRank score on the transposed graph (all edges
    reversed), i.e. the vertices with the strongest inbound connectivity.
    Ties break toward the smaller id."""
    edge_set = set(edges)
    ids = sorted({v for e in edge_set for v in e})
    n = len(ids)
    if k > n:
        raise ValueError(f"asked for {k} sources but the graph has {n} vertices")
    index = {v: i for i, v in enumerate(ids)}
    # Transposed edge (v, u) for every original (u, v).
    rows = np.fromiter((index[u] for u, v in edge_set), dtype=np.int64, count=len(edge_set))
    cols = np.fromiter((index[v] for u, v in edge_set), dtype=np.int64, count=len(edge_set))
    out_deg = np.zeros(n, dtype=np.float64)
    np.add.at(out_deg, cols, 1.0)  # out-degree in the transpose
    dangling = out_deg == 0
    safe_deg = np.where(dangling, 1.0, out_deg)
    # matrix[u, v] = 1/outdeg_T(v) for transposed edge v -> u
    matrix = csr_matrix(
        (1.0 / safe_deg[cols], (rows, cols)), shape=(n, n)
    )
    rank = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        dangling_mass = rank[dangling].sum() if dangling.any() else 0.0
        new_rank = damping * (matrix @ rank) + teleport + damping * dangling_mass / n
        delta = np.abs(new_rank - rank).sum()
        rank = new_rank
        if delta < tol:
            break
    order = sorted(range(n), key=lambda i: (-rank[i], ids[i]))
    return [ids[i] for i in order[:k]]

"""End-to-end driver: wire stream -> runtime -> engine, measure query
latency, tree stability, and ingestion rate, and write machine-readable
results (queries.csv, throughput.csv, tree_final.csv)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .baseline import RecomputeBaseline
from .engine import DynamicSsspEngine
from .oracle import AdjacencyView, ValidationReport, validate_tree, stability
from .runtime import Runtime, TraceRecorder
from .stream import (
    StreamConfig,
    is_stream_file,
    load_edge_log,
    read_stream,
    select_sources,
    synthesize_stream,
)
from .types import INF, EventKind, TopologyEvent, TreeSnapshot

ENGINES = ("sssp-del", "baseline")


@dataclass
class RunConfig:
    input: Union[str, Path]
    engine: str = "sssp-del"
    workers: int = 1
    window: Optional[float] = None
    delta: float = 0.0
    query_interval: Optional[int] = None
    source: Union[int, str] = "auto:1"
    seed: int = 0
    out_dir: Optional[Union[str, Path]] = None
    validate: bool = False
    watchdog: float = 60.0
    throughput_window: int = 10_000

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class QueryRecord:
    event_index: int
    latency_ns: int
    stability_pct: float
    tree_size: int  # finite-distance vertices

    @property
    def latency_ms(self) -> float:
        return self.latency_ns / 1e6


@dataclass(frozen=True)
class WindowRate:
    event_index: int
    events_per_sec: float


@dataclass
class RunReport:
    engine: str
    source: int
    events_total: int
    queries: list[QueryRecord] = field(default_factory=list)
    windows: list[WindowRate] = field(default_factory=list)
    final: Optional[TreeSnapshot] = None
    validated: int = 0
    wall_time_s: float = 0.0
    out_files: dict[str, Path] = field(default_factory=dict)

    def latency_percentiles_ms(self) -> Optional[tuple[float, float, float]]:
        if not self.queries:
            return None
        lat = [q.latency_ms for q in self.queries]
        p25, p50, p75 = np.percentile(lat, [25, 50, 75])
        return float(p25), float(p50), float(p75)

    def throughput_percentiles(self) -> Optional[tuple[float, float, float]]:
        if not self.windows:
            return None
        rates = [w.events_per_sec for w in self.windows]
        p25, p50, p75 = np.percentile(rates, [25, 50, 75])
        return float(p25), float(p50), float(p75)


class ValidationFailure(RuntimeError):
    def __init__(self, event_index: int, report: ValidationReport):
        super().__init__(
            f"snapshot at event {event_index} failed validation: {report.violation}"
        )
        self.event_index = event_index
        self.report = report


def materialize_events(
    cfg: RunConfig,
) -> tuple[list[TopologyEvent], set[tuple[int, int]]]:
    """Load the input and return (events, union-of-added-edges). The input is
    either a materialized stream file (a/d/q lines) or an edge log to run
    through the sliding-window synthesizer."""
    path = Path(cfg.input)
    if is_stream_file(path):
        events = read_stream(path)
        pairs = {
            (ev.src, ev.dst) for ev in events if ev.kind == EventKind.ADD_EDGE
        }
        return events, pairs
    log = load_edge_log(path)
    log.sort(key=lambda r: r.timestamp)
    if cfg.delta > 0 and cfg.window is None:
        raise ValueError("--window is required when delta > 0")
    window = cfg.window if cfg.window is not None else INF
    stream_cfg = StreamConfig(
        window=window,
        delete_prob=cfg.delta,
        query_interval=cfg.query_interval,
        seed=cfg.seed,
    )
    events = synthesize_stream(log, stream_cfg)
    return events, {(r.src, r.dst) for r in log}


def resolve_source(
    source: Union[int, str], pairs: set[tuple[int, int]]
) -> int:
    """An explicit id, or `auto:<rank>` for the rank-th vertex by inbound
    PageRank over the union of added edges."""
    if isinstance(source, int):
        return source
    text = str(source).strip()
    if text.startswith("auto"):
        rank = 1
        if ":" in text:
            rank = int(text.split(":", 1)[1])
        return select_sources(pairs, k=rank)[rank - 1]
    return int(text)


def make_engine(name: str, runtime: Runtime, source: int, **kwargs):
    if name == "sssp-del":
        return DynamicSsspEngine(runtime, source, **kwargs)
    if name == "baseline":
        return RecomputeBaseline(runtime, source)
    raise ValueError(f"unknown engine {name!r}")


def run(cfg: RunConfig, trace: Optional[TraceRecorder] = None) -> RunReport:
    """Execute the full stream and return the measured report.

    When `cfg.validate` is set, every marker snapshot is checked against a
    Dijkstra oracle over the engine's current topology; the first violation
    raises ValidationFailure.
    """
    events, pairs = materialize_events(cfg)
    source = resolve_source(cfg.source, pairs)
    runtime = Runtime(workers=cfg.workers, watchdog=cfg.watchdog, trace=trace)
    engine = make_engine(cfg.engine, runtime, source)
    report = RunReport(engine=cfg.engine, source=source, events_total=0)
    started = time.perf_counter()
    prev_snap: Optional[TreeSnapshot] = None
    event_index = 0
    window_len = cfg.throughput_window
    window_ingest_ns = 0
    window_events = 0
    try:
        for ev in events:
            if ev.kind == EventKind.QUERY_MARKER:
                t0 = time.perf_counter_ns()
                snap = engine.query(event_index)
                latency = time.perf_counter_ns() - t0
                pct = 100.0 if prev_snap is None else stability(prev_snap, snap)
                report.queries.append(
                    QueryRecord(event_index, latency, pct, snap.finite_count())
                )
                if cfg.validate:
                    _validate_snapshot(engine, snap, source, event_index, report)
                prev_snap = snap
                continue
            t0 = time.perf_counter_ns()
            engine.ingest(ev)
            window_ingest_ns += time.perf_counter_ns() - t0
            event_index += 1
            window_events += 1
            if window_events == window_len:
                report.windows.append(
                    WindowRate(event_index, window_events * 1e9 / max(window_ingest_ns, 1))
                )
                window_ingest_ns = 0
                window_events = 0
        if window_events:
            report.windows.append(
                WindowRate(event_index, window_events * 1e9 / max(window_ingest_ns, 1))
            )
        if prev_snap is not None and prev_snap.event_index == event_index:
            report.final = prev_snap
        else:
            report.final = engine.query(event_index)
            if cfg.validate:
                _validate_snapshot(engine, report.final, source, event_index, report)
    finally:
        runtime.shutdown()
    report.events_total = event_index
    report.wall_time_s = time.perf_counter() - started
    if cfg.out_dir is not None:
        _write_outputs(cfg, report)
    return report


def _validate_snapshot(engine, snap, source, event_index, report) -> None:
    adjacency = AdjacencyView.from_edges(engine.graph.export_edges())
    adjacency.ensure_vertex(source)
    result = validate_tree(snap, adjacency, source)
    if not result.passed:
        raise ValidationFailure(event_index, result)
    report.validated += 1


def _write_outputs(cfg: RunConfig, report: RunReport) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    queries = out / "queries.csv"
    with open(queries, "w", encoding="utf-8") as f:
        f.write("event_index,latency_ms,stability_pct,tree_size\n")
        for q in report.queries:
            f.write(f"{q.event_index},{q.latency_ms!r},{q.stability_pct!r},{q.tree_size}\n")
    throughput = out / "throughput.csv"
    with open(throughput, "w", encoding="utf-8") as f:
        f.write("event_index,events_per_sec\n")
        for w in report.windows:
            f.write(f"{w.event_index},{w.events_per_sec!r}\n")
    tree = out / "tree_final.csv"
    dump_tree(report.final, tree)
    report.out_files = {
        "queries": queries,
        "throughput": throughput,
        "tree_final": tree,
    }


def dump_tree(snap: TreeSnapshot, path: Union[str, Path]) -> None:
    """CSV dump `vertex,predecessor,distance`, `-` for no predecessor, `inf`
    for unreachable, sorted by vertex id. repr() keeps distances bit-exact
    for diffing."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("vertex,predecessor,distance\n")
        for v, p, d in snap.entries:
            pq = "-" if p is None else str(p)
            f.write(f"{v},{pq},{d!r}\n")


def load_tree_dump(path: Union[str, Path]) -> TreeSnapshot:
    entries = []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
        if header.strip() != "vertex,predecessor,distance":
            raise ValueError(f"{path} is not a tree dump")
        for line in f:
            if not line.strip():
                continue
            v, p, d = line.strip().split(",")
            entries.append((int(v), None if p == "-" else int(p), float(d)))
    return TreeSnapshot(tuple(entries))

import random

from dynsssp import (
    AdjacencyView,
    EventKind,
    RecomputeBaseline,
    Runtime,
    StreamConfig,
    TopologyEvent,
    dijkstra,
    synthesize_stream,
)
from _driver import drive
from _synth import random_edge_log


def test_single_edge_query():
    rt = Runtime(workers=1)
    eng = RecomputeBaseline(rt, 0)
    eng.ingest(TopologyEvent(EventKind.ADD_EDGE, 0, 2, 1.0, 1))
    snap = eng.query()
    assert snap.entries == ((0, None, 0.0), (2, 0, 1.0))
    rt.shutdown()


def test_repeated_queries_are_identical():
    rng = random.Random(51)
    rt = Runtime(workers=1)
    eng = RecomputeBaseline(rt, 0)
    for rec in random_edge_log(rng, 40, 300):
        eng.ingest(TopologyEvent(EventKind.ADD_EDGE, rec.src, rec.dst, rec.weight, rec.timestamp))
    first = eng.query()
    second = eng.query()
    assert first.entries == second.entries
    rt.shutdown()


def test_matches_dijkstra_on_every_snapshot():
    rng = random.Random(52)
    log = random_edge_log(rng, 60, 500)
    events = synthesize_stream(
        log, StreamConfig(window=70, delete_prob=0.5, query_interval=60, seed=6)
    )
    # drive() validates each marker snapshot against the replayed oracle
    drive(events, source=0, engine="baseline", validate=True)


def test_matches_dynamic_engine_at_every_marker():
    rng = random.Random(53)
    log = random_edge_log(rng, 50, 450)
    events = synthesize_stream(
        log, StreamConfig(window=60, delete_prob=0.4, query_interval=50, seed=7)
    )
    dynamic, _ = drive(events, source=0, engine="sssp-del", validate=False)
    baseline, _ = drive(events, source=0, engine="baseline", validate=False)
    assert len(dynamic) == len(baseline)
    for a, b in zip(dynamic, baseline):
        assert a.distances() == b.distances()


def test_multithreaded_baseline_agrees():
    rng = random.Random(54)
    log = random_edge_log(rng, 40, 300)
    events = synthesize_stream(
        log, StreamConfig(window=50, delete_prob=0.3, query_interval=80, seed=9)
    )
    inline, _ = drive(events, source=0, engine="baseline", validate=False)
    threaded, _ = drive(events, source=0, engine="baseline", workers=4, validate=False)
    for a, b in zip(inline, threaded):
        assert a.distances() == b.distances()


def test_no_algorithmic_state_lingers_between_queries():
    rt = Runtime(workers=1)
    eng = RecomputeBaseline(rt, 0)
    eng.ingest(TopologyEvent(EventKind.ADD_EDGE, 0, 1, 1.0, 1))
    eng.query()
    eng.ingest(TopologyEvent(EventKind.DELETE_EDGE, 0, 1, timestamp=2))
    snap = eng.query()
    # the earlier query's result for vertex 1 did not survive the cold start
    assert snap.distances()[1] == float("inf")
    assert snap.predecessors()[1] is None
    rt.shutdown()


def test_query_accepts_an_alternative_source():
    rng = random.Random(55)
    rt = Runtime(workers=1)
    eng = RecomputeBaseline(rt, 0)
    adj = AdjacencyView()
    for rec in random_edge_log(rng, 30, 200):
        eng.ingest(TopologyEvent(EventKind.ADD_EDGE, rec.src, rec.dst, rec.weight, rec.timestamp))
        adj.add_edge(rec.src, rec.dst, rec.weight)
    snap = eng.query(source=7)
    assert snap.distances() == dijkstra(adj, 7).distances()
    rt.shutdown()

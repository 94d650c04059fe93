"""The validation oracle: independent ground truth for every snapshot.

The oracle replays the same events into its own adjacency, runs Dijkstra, and
checks a snapshot four ways: predecessor edges exist, distances equal
predecessor distance plus edge weight exactly, the predecessor graph is a
tree rooted at the source, and distances equal Dijkstra's. Distances are
compared with exact float equality; both sides compute the same chain of
float additions.
"""

import random

from dynsssp import (
    AdjacencyView,
    DynamicSsspEngine,
    EventKind,
    Runtime,
    TopologyEvent,
    TreeSnapshot,
    validate_tree,
)

rng = random.Random(1)
runtime = Runtime(workers=1)
engine = DynamicSsspEngine(runtime, source=0)
replay = AdjacencyView()
replay.ensure_vertex(0)

live = set()
for step in range(4000):
    u, v = rng.randrange(120), rng.randrange(120)
    if (u, v) in live and rng.random() < 0.3:
        engine.ingest(TopologyEvent(EventKind.DELETE_EDGE, u, v))
        replay.remove_edge(u, v)
        live.discard((u, v))
    elif u != v and (u, v) not in live:
        w = round(rng.uniform(0.1, 4.0), 3)
        engine.ingest(TopologyEvent(EventKind.ADD_EDGE, u, v, w))
        replay.add_edge(u, v, w)
        live.add((u, v))

snapshot = engine.query()
report = validate_tree(snapshot, replay, source=0)
print(f"clean snapshot: passed={report.passed} ({report.checks_run} checks)")

# Corrupt one entry and watch the validator point at it.
corrupted = TreeSnapshot(
    tuple(
        (v, p, d + 0.25 if v == snapshot.entries[-1][0] and d != float("inf") else d)
        for v, p, d in snapshot.entries
    )
)
report = validate_tree(corrupted, replay, source=0)
print(f"corrupted snapshot: passed={report.passed}")
print(f"  first violation: {report.violation}")

runtime.shutdown()

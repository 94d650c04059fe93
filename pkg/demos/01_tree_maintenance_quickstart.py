"""Quickstart: keep a shortest-path tree current while edges come and go.

The engine ingests one topology event at a time. A query drains all in-flight
work (an "epoch") and returns a (vertex, predecessor, distance) snapshot.
"""

from dynsssp import DynamicSsspEngine, EventKind, Runtime, TopologyEvent


def show(label, snap):
    print(f"\n{label}")
    for vertex, pred, dist in snap.entries:
        pred_s = "-" if pred is None else pred
        print(f"  vertex {vertex}: distance {dist:g}, predecessor {pred_s}")


runtime = Runtime(workers=1)
engine = DynamicSsspEngine(runtime, source=0)

# Build a small diamond: two ways from 0 to 3.
for u, v, w in [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 5.0)]:
    engine.ingest(TopologyEvent(EventKind.ADD_EDGE, u, v, w))
show("after four additions (0->1->3 wins with cost 2)", engine.query())

# Delete the tree edge (1, 3). The subtree under it is invalidated, then
# vertex 3 re-asks its remaining in-neighbours and settles on 0->2->3.
engine.ingest(TopologyEvent(EventKind.DELETE_EDGE, 1, 3))
show("after deleting (1, 3): rerouted through 2 at cost 6", engine.query())

# Delete the fallback too; vertex 3 becomes unreachable.
engine.ingest(TopologyEvent(EventKind.DELETE_EDGE, 2, 3))
show("after deleting (2, 3): vertex 3 unreachable", engine.query())

runtime.shutdown()

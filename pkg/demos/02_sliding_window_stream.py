"""Sliding-window stream synthesis.

An edge log (src, dst, weight, timestamp) is turned into an event stream:
additions replay in timestamp order, and whenever an addition at time T is
emitted, every live edge older than T - W gets one deletion coin flip with
probability delta. delta=0 is addition-only; delta=1 removes everything that
ages out. Markers (`q`) are injected every query_interval events.
"""

import random

from dynsssp import EventKind, StreamConfig, synthesize_stream, write_stream
from dynsssp.stream import EdgeRecord

rng = random.Random(0)

# A random log: 2000 edges over 150 vertices, timestamps 1..2000.
edges = set()
while len(edges) < 2000:
    u, v = rng.randrange(150), rng.randrange(150)
    if u != v:
        edges.add((u, v))
log = [
    EdgeRecord(u, v, round(rng.uniform(0.1, 4.0), 3), i + 1)
    for i, (u, v) in enumerate(sorted(edges, key=lambda _: rng.random()))
]

print(f"log: {len(log)} edges, timestamps 1..{log[-1].timestamp}")
print(f"{'delta':>6} {'events':>7} {'adds':>6} {'deletes':>8} {'markers':>8}")
for delta in (0.0, 0.1, 0.5, 1.0):
    cfg = StreamConfig(window=600, delete_prob=delta, query_interval=250, seed=42)
    events = synthesize_stream(log, cfg)
    kinds = [ev.kind for ev in events]
    print(
        f"{delta:>6} {len(events):>7} "
        f"{kinds.count(EventKind.ADD_EDGE):>6} "
        f"{kinds.count(EventKind.DELETE_EDGE):>8} "
        f"{kinds.count(EventKind.QUERY_MARKER):>8}"
    )

# Materialize one stream to a file the CLI can replay directly.
cfg = StreamConfig(window=600, delete_prob=0.5, query_interval=250, seed=42)
write_stream(synthesize_stream(log, cfg), "demo_stream.txt")
print("\nwrote demo_stream.txt; replay it with:")
print("  dynsssp run --input demo_stream.txt --source 0 --out demo_out --validate")

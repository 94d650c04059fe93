import random
import time

import pytest

from dynsssp import (
    AlgoMessage,
    EpochTimeoutError,
    EventKind,
    HandlerPanic,
    MessageKind,
    Runtime,
    StreamConfig,
    TopologyEvent,
    TraceRecorder,
    synthesize_stream,
)
from _driver import drive
from _synth import random_edge_log

DU = MessageKind.DISTANCE_UPDATE


def _ignore_topology(ev):
    raise AssertionError("no topology expected")


def test_fifo_order_per_sender_receiver_pair():
    rt = Runtime(workers=1)
    seen = []
    rt.start(_ignore_topology, lambda msg: seen.append(msg))
    rt.send(AlgoMessage(DU, 1, 2, 3.0))
    rt.send(AlgoMessage(DU, 1, 2, 2.0))
    rt.drain()
    assert [m.distance for m in seen] == [3.0, 2.0]
    rt.shutdown()


def test_fifo_order_across_worker_threads():
    rt = Runtime(workers=3)
    seen = []
    rt.start(_ignore_topology, lambda msg: seen.append((msg.sender, msg.distance)))
    for i in range(200):
        rt.send(AlgoMessage(DU, 7, 4, float(i)))  # same receiver, one worker
    rt.enforce_epoch()
    assert [d for s, d in seen if s == 7] == [float(i) for i in range(200)]
    rt.shutdown()


def test_message_to_own_vertex_is_queued_not_reentrant():
    rt = Runtime(workers=1)
    order = []

    def handler(msg):
        order.append(("begin", msg.distance))
        if msg.distance == 0.0:
            rt.send(AlgoMessage(DU, 5, 5, 1.0))  # same worker, same vertex
        order.append(("end", msg.distance))

    rt.start(_ignore_topology, handler)
    rt.send(AlgoMessage(DU, 5, 5, 0.0))
    rt.drain()
    # the self-message ran after the sending handler returned
    assert order == [("begin", 0.0), ("end", 0.0), ("begin", 1.0), ("end", 1.0)]
    rt.shutdown()


def test_counting_termination_under_forwarding_storm():
    rt = Runtime(workers=4)
    rng = random.Random(3)

    def forward(msg):
        ttl = int(msg.distance)
        if ttl > 0:
            rt.send(AlgoMessage(DU, msg.receiver, (msg.receiver * 7 + 3) % 64, float(ttl - 1)))

    rt.start(_ignore_topology, forward)
    for i in range(10_000):
        rt.send(AlgoMessage(DU, 0, rng.randrange(64), float(rng.randrange(4))))
    rt.enforce_epoch()
    assert rt.sent_count == rt.processed_count
    assert rt.sent_count >= 10_000
    for idx, (topo, algo) in rt.queue_sizes().items():
        assert topo == 0 and algo == 0, f"worker {idx} not drained"
    rt.shutdown()


def test_epoch_on_idle_system_returns_immediately():
    rt = Runtime(workers=2)
    rt.start(_ignore_topology, lambda msg: None)
    t0 = time.perf_counter()
    rt.enforce_epoch()
    assert time.perf_counter() - t0 < 1.0
    assert rt.ingestion_paused
    rt.resume()
    assert not rt.ingestion_paused
    rt.shutdown()


def test_epoch_blocks_until_inflight_processed():
    rt = Runtime(workers=2)

    def slow(msg):
        time.sleep(0.03)

    rt.start(_ignore_topology, slow)
    for i in range(3):
        rt.send(AlgoMessage(DU, 0, i, 1.0))
    rt.enforce_epoch()
    assert rt.processed_count == rt.sent_count == 3
    rt.shutdown()


def test_no_mailbox_receives_anything_between_epoch_and_resume():
    rt = Runtime(workers=4)

    def forward(msg):
        if msg.distance > 0:
            rt.send(AlgoMessage(DU, msg.receiver, msg.receiver + 1, msg.distance - 1))

    rt.start(_ignore_topology, forward)
    for i in range(100):
        rt.send(AlgoMessage(DU, 0, i, 5.0))
    rt.enforce_epoch()
    sent = rt.sent_count
    time.sleep(0.05)
    assert rt.sent_count == sent
    assert rt.quiescent()
    rt.resume()
    rt.shutdown()


def test_topology_event_preempts_queued_algo_messages():
    rt = Runtime(workers=1)
    order = []

    def on_msg(msg):
        order.append(("algo", msg.distance))
        if msg.distance == 1.0:
            rt.submit(TopologyEvent(EventKind.ADD_EDGE, 0, 9, 1.0, 1))

    rt.start(lambda ev: order.append(("topo", ev.dst)), on_msg)
    rt.send(AlgoMessage(DU, 0, 0, 1.0))
    rt.send(AlgoMessage(DU, 0, 0, 2.0))
    rt.drain()
    # the event submitted mid-drain ran before the already-queued second message
    assert order == [("algo", 1.0), ("topo", 9), ("algo", 2.0)]
    rt.shutdown()


def _random_stream(seed, n=60, m=400, delete_prob=0.5, interval=50):
    rng = random.Random(seed)
    log = random_edge_log(rng, n, m)
    cfg = StreamConfig(window=m / 4, delete_prob=delete_prob, query_interval=interval, seed=seed)
    return synthesize_stream(log, cfg)


def test_single_worker_runs_are_byte_identical():
    events = _random_stream(21)
    first, _ = drive(events, source=0, workers=1, validate=False)
    second, _ = drive(events, source=0, workers=1, validate=False)
    assert [s.entries for s in first] == [s.entries for s in second]


def test_distances_identical_across_worker_counts():
    events = _random_stream(22, interval=80)
    reference, _ = drive(events, source=0, workers=1, validate=False)
    for workers in (2, 4, 8):
        snaps, _ = drive(events, source=0, workers=workers, validate=False)
        assert len(snaps) == len(reference)
        for a, b in zip(reference, snaps):
            assert a.distances() == b.distances()


@pytest.mark.parametrize("workers", [1, 4])
def test_every_epoch_state_passes_oracle_validation(workers):
    events = _random_stream(23, interval=30)
    drive(events, source=0, workers=workers, validate=True)


def test_handler_panic_carries_provenance_inline():
    rt = Runtime(workers=1)

    def boom(msg):
        raise ValueError("broken handler")

    rt.start(_ignore_topology, boom)
    rt.send(AlgoMessage(DU, 1, 2, 3.0))
    with pytest.raises(HandlerPanic) as exc:
        rt.drain()
    assert "worker 0" in str(exc.value)
    assert "receiver=2" in str(exc.value)
    rt.shutdown()


def test_handler_panic_propagates_from_worker_thread():
    rt = Runtime(workers=2)

    def boom(msg):
        raise ValueError("broken handler")

    rt.start(_ignore_topology, boom)
    rt.send(AlgoMessage(DU, 1, 3, 3.0))
    with pytest.raises(HandlerPanic) as exc:
        rt.enforce_epoch()
    assert "worker 1" in str(exc.value)
    rt.shutdown()


@pytest.mark.parametrize("workers", [1, 2])
def test_watchdog_trips_on_nonterminating_handler(workers):
    rt = Runtime(workers=workers, watchdog=0.3)

    def forever(msg):
        rt.send(AlgoMessage(DU, msg.receiver, msg.receiver, 1.0))

    rt.start(_ignore_topology, forever)
    rt.send(AlgoMessage(DU, 0, 0, 1.0))
    with pytest.raises(EpochTimeoutError) as exc:
        rt.drain()
    assert "queue sizes" in str(exc.value)
    rt.shutdown()


def test_trace_records_processed_counts():
    rt = Runtime(workers=1, trace=TraceRecorder(keep_log=True))
    rt.start(_ignore_topology, lambda msg: None)
    for i in range(5):
        rt.send(AlgoMessage(DU, 0, 1, float(i)))
    rt.drain()
    assert rt.trace.messages_processed(kind=DU) == 5
    assert len(rt.trace.log) == 5
    rt.shutdown()

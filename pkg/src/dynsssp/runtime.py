"""Asynchronous vertex-centric execution: mailboxes, workers, epochs.

Two execution modes share one API:

* ``workers == 1``: the single worker's loop is pumped inline on the
  controller thread after every submitted event. There are no threads, so a
  fixed stream yields a byte-identical snapshot sequence. This is the
  deterministic reference schedule.
* ``workers > 1``: one thread per worker. Cross-thread interaction happens
  only through mailbox enqueues; the per-worker counters below are each
  written by exactly one thread, which keeps quiescence detection lock-free.

Quiescence is counter-based: every enqueued item bumps the receiving
mailbox's ``enqueued``; a worker bumps its ``processed`` only after the
handler for an item has finished (including all sends the handler issued).
``sum(processed) <= sum(enqueued)`` therefore holds at every instant, with
equality exactly when no item is queued and no handler is running. The
controller reads all ``processed`` counters before all ``enqueued`` counters;
monotonicity makes that ordered double read sound despite the races.
"""

from __future__ import annotations

import threading
import time
from collections import Counter, deque
from typing import Callable, Optional

from .graph import PartitionedGraph
from .types import (
    AlgoMessage,
    EpochTimeoutError,
    HandlerPanic,
    Phase,
    TopologyEvent,
    TreeSnapshot,
)

TopologyHandler = Callable[[TopologyEvent], None]
MessageHandler = Callable[[AlgoMessage], None]

# How many items the inline pump processes between watchdog clock checks.
_WATCHDOG_STRIDE = 1 << 16


class TraceRecorder:
    """Optional instrumentation: counts processed items by (phase, kind).

    With ``keep_log=True`` it also records the full processed sequence, which
    small tests use to assert ordering properties. Attach one to a Runtime
    before ``start``; the hot path pays a single None-check when disabled.
    """

    def __init__(self, keep_log: bool = False):
        self.message_counts: Counter = Counter()
        self.event_counts: Counter = Counter()
        self.log: Optional[list] = [] if keep_log else None

    def message(self, phase: int, msg: AlgoMessage) -> None:
        self.message_counts[(phase, msg.kind)] += 1
        if self.log is not None:
            self.log.append((phase, msg))

    def event(self, phase: int, ev: TopologyEvent) -> None:
        self.event_counts[(phase, ev.kind)] += 1
        if self.log is not None:
            self.log.append((phase, ev))

    def messages_processed(self, phase: Optional[int] = None, kind: Optional[int] = None) -> int:
        total = 0
        for (ph, kd), n in self.message_counts.items():
            if (phase is None or ph == phase) and (kind is None or kd == kind):
                total += n
        return total


class Mailbox:
    """Two-lane FIFO queue. Topology events outrank algorithmic messages:
    the owner never dequeues from the algo lane while the topology lane is
    non-empty."""

    __slots__ = ("topology_lane", "algo_lane", "ready", "enqueued", "waiting")

    def __init__(self):
        self.topology_lane: deque = deque()
        self.algo_lane: deque = deque()
        self.ready = threading.Condition()
        self.enqueued = 0  # guarded by `ready` in threaded mode
        self.waiting = False

    def sizes(self) -> tuple[int, int]:
        return len(self.topology_lane), len(self.algo_lane)


class Worker:
    """One partition owner. `processed` is written only by this worker's
    thread (or by the inline pump)."""

    __slots__ = ("idx", "mailbox", "processed", "thread")

    def __init__(self, idx: int):
        self.idx = idx
        self.mailbox = Mailbox()
        self.processed = 0
        self.thread: Optional[threading.Thread] = None


class Runtime:
    """Owns the partitioned graph, the workers, and the epoch controller."""

    def __init__(
        self,
        workers: int = 1,
        watchdog: float = 60.0,
        trace: Optional[TraceRecorder] = None,
    ):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.graph = PartitionedGraph(workers)
        self.worker_count = workers
        self.inline = workers == 1
        self.watchdog = watchdog
        self.trace = trace
        self.phase: int = Phase.IDLE
        self.workers = [Worker(i) for i in range(workers)]
        self.ingestion_paused = False
        self._on_topology: Optional[TopologyHandler] = None
        self._on_message: Optional[MessageHandler] = None
        self._idle = threading.Condition()
        self._panic: Optional[tuple[int, object, BaseException]] = None
        self._stopped = False
        self._started = False

    # -- lifecycle -----------------------------------------------------------

    def start(self, on_topology: TopologyHandler, on_message: MessageHandler) -> None:
        if self._started:
            raise RuntimeError("runtime already started")
        self._on_topology = on_topology
        self._on_message = on_message
        self._started = True
        if not self.inline:
            for w in self.workers:
                t = threading.Thread(target=self._worker_loop, args=(w,), daemon=True)
                w.thread = t
                t.start()

    def shutdown(self) -> None:
        if not self._started or self._stopped:
            self._stopped = True
            return
        self._stopped = True
        if not self.inline:
            for w in self.workers:
                with w.mailbox.ready:
                    w.mailbox.ready.notify_all()
            for w in self.workers:
                if w.thread is not None:
                    w.thread.join()

    def __enter__(self) -> "Runtime":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    # -- enqueue paths -------------------------------------------------------

    def send(self, msg: AlgoMessage) -> None:
        """Enqueue an algorithmic message on the receiver's owner. Messages to
        a vertex on the same worker still traverse the mailbox, so handlers
        are never reentered."""
        mb = self.workers[msg.receiver % self.worker_count].mailbox
        if self.inline:
            mb.algo_lane.append(msg)
            mb.enqueued += 1
        else:
            with mb.ready:
                mb.algo_lane.append(msg)
                mb.enqueued += 1
                if mb.waiting:
                    mb.ready.notify()

    def submit(self, ev: TopologyEvent) -> None:
        """Enqueue a topology event on the tail vertex's owner."""
        mb = self.workers[ev.src % self.worker_count].mailbox
        if self.inline:
            mb.topology_lane.append(ev)
            mb.enqueued += 1
        else:
            with mb.ready:
                mb.topology_lane.append(ev)
                mb.enqueued += 1
                if mb.waiting:
                    mb.ready.notify()

    # -- quiescence / epochs ---------------------------------------------------

    @property
    def sent_count(self) -> int:
        return sum(w.mailbox.enqueued for w in self.workers)

    @property
    def processed_count(self) -> int:
        return sum(w.processed for w in self.workers)

    def quiescent(self) -> bool:
        # Read processed before enqueued: both are monotone, so equality of
        # the ordered sums certifies a real quiescent instant.
        processed = 0
        for w in self.workers:
            processed += w.processed
        enqueued = 0
        for w in self.workers:
            enqueued += w.mailbox.enqueued
        return processed == enqueued

    def drain(self) -> None:
        """Block until no in-flight work exists anywhere."""
        if self.inline:
            self._pump()
        else:
            self._drain_threaded()

    def enforce_epoch(self) -> None:
        """Pause ingestion and drain. On return the system is quiescent and
        stays so until the controller sends or resumes."""
        self.ingestion_paused = True
        self.drain()

    def resume(self) -> None:
        self.ingestion_paused = False

    def collect_state(self, event_index: int = 0) -> TreeSnapshot:
        """Snapshot (vertex, predecessor, distance) for every vertex.
        Caller must hold an epoch."""
        entries = []
        for part in self.graph.partitions:
            for vid, st in part.vertices.items():
                entries.append((vid, st.predecessor, st.distance))
        entries.sort(key=lambda e: e[0])
        return TreeSnapshot(tuple(entries), event_index)

    def collect_marked(self) -> list[int]:
        """Drain the per-partition lists of freshly invalidated vertices.
        Controller thread, at quiescence."""
        marked: list[int] = []
        for part in self.graph.partitions:
            if part.marked_dirty:
                marked.extend(part.marked_dirty)
                part.marked_dirty.clear()
        return marked

    def queue_sizes(self) -> dict[int, tuple[int, int]]:
        return {w.idx: w.mailbox.sizes() for w in self.workers}

    # -- inline execution ------------------------------------------------------

    def _pump(self) -> None:
        worker = self.workers[0]
        mb = worker.mailbox
        topo = mb.topology_lane
        algo = mb.algo_lane
        on_topology = self._on_topology
        on_message = self._on_message
        if on_topology is None or on_message is None:
            raise RuntimeError("runtime not started")
        trace = self.trace
        stride = _WATCHDOG_STRIDE
        deadline = time.monotonic() + self.watchdog
        budget = stride
        while topo or algo:
            if topo:
                item = topo.popleft()
                try:
                    on_topology(item)
                except Exception as exc:
                    raise HandlerPanic(
                        f"worker 0 failed while handling {item!r}"
                    ) from exc
                worker.processed += 1
                if trace is not None:
                    trace.event(self.phase, item)
            else:
                msg = algo.popleft()
                try:
                    on_message(msg)
                except Exception as exc:
                    raise HandlerPanic(
                        f"worker 0 failed while handling {msg!r}"
                    ) from exc
                worker.processed += 1
                if trace is not None:
                    trace.message(self.phase, msg)
            budget -= 1
            if budget == 0:
                budget = stride
                if time.monotonic() > deadline:
                    raise EpochTimeoutError(
                        f"no quiescence within {self.watchdog}s; "
                        f"queue sizes {self.queue_sizes()}"
                    )

    # -- threaded execution ------------------------------------------------------

    def _worker_loop(self, worker: Worker) -> None:
        mb = worker.mailbox
        topo = mb.topology_lane
        algo = mb.algo_lane
        on_topology = self._on_topology
        on_message = self._on_message
        trace = self.trace
        while True:
            with mb.ready:
                # A stopped runtime abandons whatever is still queued; normal
                # shutdown happens after an epoch, when the lanes are empty.
                if self._stopped:
                    return
                while not topo and not algo:
                    if self._stopped:
                        return
                    mb.waiting = True
                    self._announce_idle()
                    mb.ready.wait()
                    mb.waiting = False
                if topo:
                    item = topo.popleft()
                    is_event = True
                else:
                    item = algo.popleft()
                    is_event = False
            try:
                if is_event:
                    on_topology(item)
                else:
                    on_message(item)
            except BaseException as exc:
                with self._idle:
                    self._panic = (worker.idx, item, exc)
                    self._idle.notify_all()
                return
            worker.processed += 1
            if trace is not None:
                if is_event:
                    trace.event(self.phase, item)
                else:
                    trace.message(self.phase, item)

    def _announce_idle(self) -> None:
        with self._idle:
            self._idle.notify_all()

    def _drain_threaded(self) -> None:
        deadline = time.monotonic() + self.watchdog
        with self._idle:
            while True:
                if self._panic is not None:
                    idx, item, exc = self._panic
                    raise HandlerPanic(
                        f"worker {idx} failed while handling {item!r}"
                    ) from exc
                if self.quiescent():
                    return
                if time.monotonic() > deadline:
                    raise EpochTimeoutError(
                        f"no quiescence within {self.watchdog}s; "
                        f"queue sizes {self.queue_sizes()}"
                    )
                # Parking workers notify; the timed wait is only a fallback
                # probe while workers stay busy.
                self._idle.wait(0.05)

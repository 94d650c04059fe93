"""Shared message, event, snapshot, and error types."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Optional

INF = math.inf

# Vertex ids are unsigned 32-bit integers on the wire.
MAX_VERTEX_ID = 2**32 - 1


class MessageKind(IntEnum):
    DISTANCE_QUERY = 0
    DISTANCE_UPDATE = 1
    SET_TO_INFINITY = 2
    ADD_TO_SUCCESSOR = 3
    REMOVE_FROM_SUCCESSOR = 4


class EventKind(IntEnum):
    ADD_EDGE = 0
    DELETE_EDGE = 1
    QUERY_MARKER = 2


class Phase(IntEnum):
    """Engine phase label attached to processed items by the trace recorder."""

    IDLE = 0
    INVALIDATION = 1
    RECOMPUTATION = 2


class AlgoMessage(NamedTuple):
    """One algorithmic message between two vertices.

    `distance` is present exactly when kind == DISTANCE_UPDATE.
    """

    kind: int
    sender: int
    receiver: int
    distance: Optional[float] = None


class TopologyEvent(NamedTuple):
    """One event from the input stream: edge addition, edge deletion, or query marker.

    `weight` is present exactly when kind == ADD_EDGE. `timestamp` is the
    logical time of the event (strictly increasing indices when the input has
    no native timestamps).
    """

    kind: int
    src: int = 0
    dst: int = 0
    weight: Optional[float] = None
    timestamp: int = 0


class WeightedEdge(NamedTuple):
    destination: int
    weight: float


@dataclass(frozen=True)
class TreeSnapshot:
    """Quiescent-point result: one (vertex, predecessor, distance) triple per vertex.

    Entries are sorted by vertex id. `predecessor` is None for the source and
    for unreachable vertices; unreachable vertices carry distance +inf.
    """

    entries: tuple[tuple[int, Optional[int], float], ...]
    event_index: int = 0

    def distances(self) -> dict[int, float]:
        return {v: d for v, _, d in self.entries}

    def predecessors(self) -> dict[int, Optional[int]]:
        return {v: p for v, p, _ in self.entries}

    def finite_count(self) -> int:
        return sum(1 for _, _, d in self.entries if d != INF)

    def __len__(self) -> int:
        return len(self.entries)


class StreamFormatError(ValueError):
    """Malformed input: unparsable line, bad weight, bad vertex id."""


class StreamConsistencyError(RuntimeError):
    """The stream violated its own ordering contract (e.g. delete before add)."""


class InternalConsistencyError(RuntimeError):
    """A state invariant that the epoch discipline should make impossible was broken."""


class EpochTimeoutError(RuntimeError):
    """Quiescence was not reached within the watchdog; indicates a handler bug."""


class HandlerPanic(RuntimeError):
    """A vertex handler raised; carries the offending worker and item."""

"""
Two-lane store queue for outgoing datums.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, Dict, List, Optional, Tuple

from ..protocol import Fragment


class Priority(str, Enum):
    HIGH = 'High'
    NORMAL = 'Normal'


class NodeError(ValueError):
    """Base class for node-level rejections."""


class KindFiltered(NodeError):
    """Datum kind is not accepted by the SatComms task."""


class QueueFull(NodeError):
    """Datum does not fit the remaining queue capacity."""


@dataclass(eq=False)
class QueuedDatum:
    """A datum waiting to be sent, with its fragments still to transmit."""

    datum_id: int
    kind: str
    priority: Priority
    enqueued_at: int
    msg_id: int
    size: int
    pending: Deque[Tuple[Fragment, bytes]] = field(default_factory=deque)

    @property
    def remaining_bytes(self) -> int:
        return sum(f.header.payload_len for f, _ in self.pending)


class StoreQueue:
    """
    FIFO per priority; HIGH drains before NORMAL.

    Capacity is measured in payload bytes still waiting to be sent.
    """

    def __init__(self, capacity_bytes: int):
        if capacity_bytes <= 0:
            raise ValueError(f"capacity_bytes must be > 0, got {capacity_bytes}")
        self.capacity_bytes = capacity_bytes
        self._lanes: Dict[Priority, Deque[QueuedDatum]] = {
            Priority.HIGH: deque(),
            Priority.NORMAL: deque(),
        }

    def __len__(self) -> int:
        return sum(len(lane) for lane in self._lanes.values())

    @property
    def stored_bytes(self) -> int:
        return sum(d.remaining_bytes for lane in self._lanes.values() for d in lane)

    @property
    def fragment_count(self) -> int:
        return sum(len(d.pending) for lane in self._lanes.values() for d in lane)

    def is_empty(self) -> bool:
        return self.fragment_count == 0

    def can_accept(self, size: int) -> bool:
        return size <= self.capacity_bytes - self.stored_bytes

    def push(self, datum: QueuedDatum):
        if not self.can_accept(datum.remaining_bytes):
            raise QueueFull(
                f"datum {datum.datum_id} needs {datum.remaining_bytes} B, "
                f"{self.capacity_bytes - self.stored_bytes} B free"
            )
        self._lanes[datum.priority].append(datum)

    def peek(self) -> Optional[QueuedDatum]:
        for priority in (Priority.HIGH, Priority.NORMAL):
            for datum in self._lanes[priority]:
                if datum.pending:
                    return datum
        return None

    def pop_fragment(self) -> Optional[Tuple[QueuedDatum, Fragment, bytes]]:
        """Take the next fragment; the datum leaves the queue with its last one."""
        datum = self.peek()
        if datum is None:
            return None
        fragment, wire = datum.pending.popleft()
        if not datum.pending:
            self._lanes[datum.priority].remove(datum)
        return datum, fragment, wire

    def requeue(self, datum: QueuedDatum, fragment: Fragment, wire: bytes):
        """Put an interrupted fragment back at the head of the queue."""
        datum.pending.appendleft((fragment, wire))
        lane = self._lanes[datum.priority]
        if datum in lane:
            lane.remove(datum)
        lane.appendleft(datum)

    def datum_ids(self) -> List[int]:
        return [d.datum_id for p in (Priority.HIGH, Priority.NORMAL) for d in self._lanes[p]]

    def pending_keys(self) -> List[Tuple[int, int]]:
        return [
            f.key
            for p in (Priority.HIGH, Priority.NORMAL)
            for d in self._lanes[p]
            for f, _ in d.pending
        ]

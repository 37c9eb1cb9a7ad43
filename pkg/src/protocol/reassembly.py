"""
Receiver-side reassembly with duplicate suppression and age-based eviction.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .models import Fragment

logger = logging.getLogger(__name__)

Key = Tuple[int, int]


class IngestOutcome(str, Enum):
    DUPLICATE = 'Duplicate'
    STORED = 'Stored'
    COMPLETED = 'Completed'
    CONFLICT = 'Conflict'


@dataclass(frozen=True)
class IngestResult:
    """Outcome of one ingest; data is set only for COMPLETED."""

    outcome: IngestOutcome
    key: Key
    data: Optional[bytes] = None


@dataclass
class ReassemblyBuffer:
    """Slices of one in-progress datum, keyed by (src_node, msg_id)."""

    key: Key
    frag_total: int
    first_seen: int
    last_update: int
    slots: Dict[int, bytes] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return len(self.slots) == self.frag_total

    def assemble(self) -> bytes:
        return b''.join(self.slots[i] for i in range(self.frag_total))


@dataclass
class _CompletionRecord:
    frag_total: int
    slots: Dict[int, bytes]
    last_update: int

    def matches(self, fragment: Fragment) -> bool:
        return (
            fragment.header.frag_total == self.frag_total
            and self.slots.get(fragment.index) == fragment.payload
        )


class ReassemblyStore:
    """
    Single-owner reassembly state.

    Completed datums leave a completion record behind so that late redundant
    copies are reported as duplicates instead of opening a new buffer.
    """

    def __init__(self):
        self._buffers: Dict[Key, ReassemblyBuffer] = {}
        self._completed: Dict[Key, _CompletionRecord] = {}

    def __len__(self) -> int:
        return len(self._buffers)

    def __contains__(self, key: Key) -> bool:
        return key in self._buffers

    def buffer(self, key: Key) -> Optional[ReassemblyBuffer]:
        return self._buffers.get(key)

    def pending_keys(self) -> List[Key]:
        return sorted(self._buffers)

    def ingest(self, fragment: Fragment, now: int) -> IngestResult:
        key = fragment.key
        header = fragment.header

        record = self._completed.get(key)
        if record is not None:
            if record.matches(fragment):
                return IngestResult(IngestOutcome.DUPLICATE, key)
            # same key, new content: msg_id was reused
            del self._completed[key]

        buf = self._buffers.get(key)
        if buf is None:
            buf = ReassemblyBuffer(key, header.frag_total, now, now)
            self._buffers[key] = buf
        elif buf.frag_total != header.frag_total:
            logger.debug("frag_total conflict on %s: %d vs %d",
                         key, buf.frag_total, header.frag_total)
            del self._buffers[key]
            return IngestResult(IngestOutcome.CONFLICT, key)
        elif fragment.index in buf.slots:
            return IngestResult(IngestOutcome.DUPLICATE, key)

        buf.slots[fragment.index] = fragment.payload
        buf.last_update = now

        if not buf.complete:
            return IngestResult(IngestOutcome.STORED, key)

        del self._buffers[key]
        self._completed[key] = _CompletionRecord(buf.frag_total, buf.slots, now)
        return IngestResult(IngestOutcome.COMPLETED, key, buf.assemble())

    def evict_stale(self, now: int, max_age: int) -> List[Key]:
        """
        Drop buffers idle for strictly longer than max_age.

        Returns:
            Evicted buffer keys, sorted. Expired completion records are
            dropped silently.

        Raises:
            ValueError: If max_age <= 0
        """
        if max_age <= 0:
            raise ValueError(f"max_age must be > 0, got {max_age}")

        evicted = sorted(k for k, b in self._buffers.items() if now - b.last_update > max_age)
        for key in evicted:
            del self._buffers[key]

        expired = [k for k, r in self._completed.items() if now - r.last_update > max_age]
        for key in expired:
            del self._completed[key]

        if evicted:
            logger.debug("evicted %d stale buffers at t=%d", len(evicted), now)
        return evicted


def ingest_fragment(store: ReassemblyStore, fragment: Fragment, now: int) -> IngestResult:
    return store.ingest(fragment, now)


def evict_stale(store: ReassemblyStore, now: int, max_age: int) -> List[Key]:
    return store.evict_stale(now, max_age)
